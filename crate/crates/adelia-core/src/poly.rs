//! Dense univariate polynomials over a prime field F_p, and their fractions.
//!
//! Coefficients are stored little-endian with no trailing zeros; the zero
//! polynomial has an empty coefficient vector. The modulus is carried on
//! every value so mixed-modulus arithmetic is caught immediately.

use std::fmt;

fn addm(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invm(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, a != 0 mod p
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible mod {p}");
    s0.rem_euclid(p as i128) as u64
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Poly::new(p, vec![1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Poly::new(p, vec![c])
    }

    pub fn t(p: u64) -> Self {
        Poly::new(p, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.p, other.p, "mixed moduli {} vs {}", self.p, other.p);
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = addm(a, b, self.p);
        }
        Poly::new(self.p, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.p, self.coeffs.iter().map(|&c| subm(0, c, self.p)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, self.p), self.p);
            }
        }
        Poly::new(self.p, out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        Poly::new(self.p, self.coeffs.iter().map(|&a| mulm(a, c, self.p)).collect())
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        self.check(div);
        assert!(!div.is_zero(), "division by zero polynomial");
        let dlead_inv = invm(div.leading(), self.p);
        let ddeg = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg && !rem.is_empty() {
            let rdeg = rem.len() - 1;
            let c = mulm(*rem.last().unwrap(), dlead_inv, self.p);
            if c != 0 {
                quo[rdeg - ddeg] = c;
                for (k, &dc) in div.coeffs.iter().enumerate() {
                    rem[rdeg - ddeg + k] = subm(rem[rdeg - ddeg + k], mulm(c, dc, self.p), self.p);
                }
            }
            rem.pop();
        }
        (Poly::new(self.p, quo), Poly::new(self.p, rem))
    }

    pub fn rem(&self, div: &Poly) -> Poly {
        self.divrem(div).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.leading(), self.p))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            (r0, r1) = (r1, r);
            let ns1 = s0.sub(&q.mul(&s1));
            (s0, s1) = (s1, ns1);
            let nt1 = t0.sub(&q.mul(&t1));
            (t0, t1) = (t1, nt1);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = invm(r0.leading(), p);
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.p);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Irreducibility over F_p by trial division, adequate at desk scale.
    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(d) => {
                let mut divisor = Poly::t(self.p);
                loop {
                    match divisor.degree() {
                        Some(dd) if dd * 2 <= d => {}
                        _ => return true,
                    }
                    if divisor.leading() == 1 && divisor.divides(self) {
                        return false;
                    }
                    divisor = next_poly(&divisor);
                }
            }
        }
    }

    /// Multiplicity of the irreducible `q` in `self`; None for zero input.
    pub fn valuation(&self, q: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0i64;
        let mut cur = self.clone();
        loop {
            let (quo, rem) = cur.divrem(q);
            if !rem.is_zero() {
                return Some(v);
            }
            v += 1;
            cur = quo;
        }
    }
}

/// Successor in the enumeration of polynomials by coefficient counting.
fn next_poly(f: &Poly) -> Poly {
    let p = f.p;
    let mut c = f.coeffs().to_vec();
    let mut i = 0;
    loop {
        if i == c.len() {
            c.push(1);
            break;
        }
        c[i] += 1;
        if c[i] < p {
            break;
        }
        c[i] = 0;
        i += 1;
    }
    Poly { p, coeffs: c }
}

/// Monic irreducibles of F_p[t] in enumeration order; used to pick a
/// deterministic witness prime outside a given set.
pub fn monic_irreducibles(p: u64) -> impl Iterator<Item = Poly> {
    let mut cur = Poly::t(p);
    std::iter::from_fn(move || loop {
        let cand = cur.clone();
        cur = next_poly(&cur);
        if cand.leading() == 1 && cand.is_irreducible() {
            return Some(cand);
        }
    })
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}t")?,
                _ if c == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

/// Reduced fraction of polynomials; denominator monic and nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFrac {
    pub num: Poly,
    pub den: Poly,
}

impl PolyFrac {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let p = num.p;
            return PolyFrac { num, den: Poly::one(p) };
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let c = invm(den.leading(), den.p);
        PolyFrac { num: num.scale(c), den: den.scale(c) }
    }

    pub fn from_poly(f: Poly) -> Self {
        let p = f.p;
        PolyFrac { num: f, den: Poly::one(p) }
    }

    pub fn zero(p: u64) -> Self {
        PolyFrac::from_poly(Poly::zero(p))
    }

    pub fn one(p: u64) -> Self {
        PolyFrac::from_poly(Poly::one(p))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &PolyFrac) -> PolyFrac {
        PolyFrac::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &PolyFrac) -> PolyFrac {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyFrac {
        PolyFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &PolyFrac) -> PolyFrac {
        PolyFrac::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<PolyFrac> {
        if self.is_zero() {
            None
        } else {
            Some(PolyFrac::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn valuation(&self, q: &Poly) -> Option<i64> {
        let nv = self.num.valuation(q)?;
        let dv = self.den.valuation(q).expect("nonzero denominator");
        Some(nv - dv)
    }
}

impl fmt::Display for PolyFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for PolyFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let p = 5;
        let a = Poly::new(p, vec![1, 2, 3, 4]);
        let b = Poly::new(p, vec![2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn xgcd_identity() {
        let p = 5;
        let a = Poly::new(p, vec![0, 1]).mul(&Poly::new(p, vec![1, 1])); // t(t+1)
        let b = Poly::new(p, vec![0, 1]).pow(3); // t^3
        let (g, u, v) = a.xgcd(&b);
        assert_eq!(g, Poly::t(p));
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }

    #[test]
    fn irreducibility() {
        let p = 5;
        assert!(Poly::t(p).is_irreducible());
        assert!(Poly::new(p, vec![4, 1]).is_irreducible()); // t - 1
        assert!(!Poly::new(p, vec![0, 0, 1]).is_irreducible()); // t^2
        // t^2 + 2 over F_5: squares are 0,1,4 so -2=3 is not a square
        assert!(Poly::new(p, vec![2, 0, 1]).is_irreducible());
        // t^2 - 1 = (t-1)(t+1)
        assert!(!Poly::new(p, vec![4, 0, 1]).is_irreducible());
    }

    #[test]
    fn valuation_of_fraction() {
        // v_t((t^2+t)/t^3) = -2 over F_5
        let p = 5;
        let num = Poly::new(p, vec![0, 1, 1]);
        let den = Poly::t(p).pow(3);
        let f = PolyFrac::new(num, den);
        assert_eq!(f.valuation(&Poly::t(p)), Some(-2));
    }

    #[test]
    fn irreducible_enumeration_skips_reducibles() {
        let firsts: Vec<Poly> = monic_irreducibles(2).take(4).collect();
        assert_eq!(firsts[0], Poly::t(2));
        assert_eq!(firsts[1], Poly::new(2, vec![1, 1])); // t+1
        assert_eq!(firsts[2], Poly::new(2, vec![1, 1, 1])); // t^2+t+1
        assert!(firsts[3].degree() == Some(3));
    }
}
