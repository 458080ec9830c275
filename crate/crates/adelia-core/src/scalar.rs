//! Exact scalars over the two supported base PIDs.
//!
//! Everything the engine computes is either a big rational (base Z) or a
//! rational function over F_p (base F_p[t]). No floating point anywhere.

use crate::error::{Error, Result};
use crate::poly::{monic_irreducibles, Poly, PolyFrac};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Which fraction field a scalar lives in: Q or F_p(t).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarFamily {
    Rational,
    RationalFunction(u64),
}

impl fmt::Display for ScalarFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFamily::Rational => write!(f, "Q"),
            ScalarFamily::RationalFunction(p) => write!(f, "F{p}(t)"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fun(PolyFrac),
}

impl Scalar {
    pub fn family(&self) -> ScalarFamily {
        match self {
            Scalar::Rat(_) => ScalarFamily::Rational,
            Scalar::Fun(f) => ScalarFamily::RationalFunction(f.den.p),
        }
    }

    pub fn zero(family: ScalarFamily) -> Scalar {
        match family {
            ScalarFamily::Rational => Scalar::Rat(BigRational::zero()),
            ScalarFamily::RationalFunction(p) => Scalar::Fun(PolyFrac::zero(p)),
        }
    }

    pub fn one(family: ScalarFamily) -> Scalar {
        match family {
            ScalarFamily::Rational => Scalar::Rat(BigRational::one()),
            ScalarFamily::RationalFunction(p) => Scalar::Fun(PolyFrac::one(p)),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::Rat(BigRational::from_integer(n))
    }

    pub fn from_poly(f: Poly) -> Scalar {
        Scalar::Fun(PolyFrac::from_poly(f))
    }

    pub fn int_in_family(family: ScalarFamily, n: i64) -> Scalar {
        match family {
            ScalarFamily::Rational => Scalar::from_int(n),
            ScalarFamily::RationalFunction(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                Scalar::from_poly(Poly::constant(p, m))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fun(f) => f.is_poly() && f.num == Poly::one(f.num.p),
        }
    }

    fn pair<'a>(&'a self, o: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
        assert_eq!(self.family(), o.family(), "scalar family mismatch");
        (self, o)
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match self.pair(o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.add(b)),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match self.pair(o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.sub(b)),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match self.pair(o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.mul(b)),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fun(a) => Scalar::Fun(a.neg()),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fun(a) => a.inv().map(Scalar::Fun),
        }
    }

    /// Exact division in the fraction field.
    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self.mul(&i))
    }

    /// True when the scalar lies in the base PID itself (Z or F_p[t]).
    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.denom().is_one(),
            Scalar::Fun(f) => f.is_poly(),
        }
    }

    pub fn as_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(r) if r.denom().is_one() => Some(r.numer().clone()),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fun(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A prime of the base PID: a positive prime integer or a monic irreducible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Int(BigInt),
    Poly(Poly),
}

impl Prime {
    pub fn int(n: i64) -> Result<Prime> {
        Prime::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Result<Prime> {
        let n = n.abs();
        if !is_prime_int(&n) {
            return Err(Error::InvalidPrime(n.to_string()));
        }
        Ok(Prime::Int(n))
    }

    pub fn poly(f: Poly) -> Result<Prime> {
        let f = f.monic();
        if !f.is_irreducible() {
            return Err(Error::InvalidPrime(f.to_string()));
        }
        Ok(Prime::Poly(f))
    }

    pub fn family(&self) -> ScalarFamily {
        match self {
            Prime::Int(_) => ScalarFamily::Rational,
            Prime::Poly(f) => ScalarFamily::RationalFunction(f.p),
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            Prime::Int(n) => Scalar::from_bigint(n.clone()),
            Prime::Poly(f) => Scalar::from_poly(f.clone()),
        }
    }

    pub fn pow_scalar(&self, e: u32) -> Scalar {
        match self {
            Prime::Int(n) => Scalar::from_bigint(n.pow(e)),
            Prime::Poly(f) => Scalar::from_poly(f.pow(e)),
        }
    }

    /// v_q(x); Err(ZeroElement) on zero input.
    pub fn valuation(&self, x: &Scalar) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        assert_eq!(self.family(), x.family(), "valuation family mismatch");
        match (self, x) {
            (Prime::Int(q), Scalar::Rat(r)) => {
                Ok(int_valuation(r.numer(), q) - int_valuation(r.denom(), q))
            }
            (Prime::Poly(q), Scalar::Fun(f)) => Ok(f.valuation(q).unwrap()),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Int(n) => write!(f, "{n}"),
            Prime::Poly(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

fn int_valuation(x: &BigInt, q: &BigInt) -> i64 {
    assert!(!x.is_zero());
    let mut v = 0;
    let mut cur = x.abs();
    loop {
        let (quo, rem) = num_integer::Integer::div_rem(&cur, q);
        if !rem.is_zero() {
            return v;
        }
        v += 1;
        cur = quo;
    }
}

/// Deterministic Miller-Rabin for u64-sized inputs; trial division beyond.
pub fn is_prime_int(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    // desk-scale inputs never get here; keep an exact fallback anyway
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    let mut d = two.clone();
    while &d * &d <= *n {
        if num_integer::Integer::is_multiple_of(n, &d) {
            return false;
        }
        d += 1;
    }
    true
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // deterministic witness set for u64
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut out = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            out = mul_mod(out, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    out
}

/// First prime of the family not in `exclude`, for defect witnesses.
pub fn first_prime_outside(family: ScalarFamily, exclude: &[Prime]) -> Prime {
    match family {
        ScalarFamily::Rational => {
            let mut n = BigInt::from(2);
            loop {
                if is_prime_int(&n) {
                    let cand = Prime::Int(n.clone());
                    if !exclude.contains(&cand) {
                        return cand;
                    }
                }
                n += 1;
            }
        }
        ScalarFamily::RationalFunction(p) => {
            for f in monic_irreducibles(p) {
                let cand = Prime::Poly(f);
                if !exclude.contains(&cand) {
                    return cand;
                }
            }
            unreachable!()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn integer_valuations() {
        // v_2(4/3) = 2, v_3(9/2) = 2
        let two = Prime::int(2).unwrap();
        let three = Prime::int(3).unwrap();
        let x = Scalar::Rat(BigRational::new(BigInt::from(4), BigInt::from(3)));
        let y = Scalar::Rat(BigRational::new(BigInt::from(9), BigInt::from(2)));
        assert_eq!(two.valuation(&x).unwrap(), 2);
        assert_eq!(three.valuation(&y).unwrap(), 2);
        assert_eq!(two.valuation(&Scalar::zero(ScalarFamily::Rational)), Err(Error::ZeroElement));
    }

    #[test]
    fn poly_valuation_in_family() {
        // v_t((t^2+t)/t^3) = -2 in F_5(t)
        let p = 5;
        let t = Prime::poly(Poly::t(p)).unwrap();
        let x = Scalar::Fun(crate::poly::PolyFrac::new(
            Poly::new(p, vec![0, 1, 1]),
            Poly::t(p).pow(3),
        ));
        assert_eq!(t.valuation(&x).unwrap(), -2);
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::int(6).is_err());
        assert!(Prime::int(97).is_ok());
        assert!(Prime::poly(Poly::new(5, vec![4, 0, 1])).is_err()); // t^2-1
    }

    #[test]
    fn witness_prime_enumeration() {
        let ex = vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()];
        assert_eq!(first_prime_outside(ScalarFamily::Rational, &ex), Prime::int(5).unwrap());
        let p5 = ScalarFamily::RationalFunction(5);
        let ex2 = vec![
            Prime::poly(Poly::t(5)).unwrap(),
            Prime::poly(Poly::new(5, vec![4, 1])).unwrap(),
        ];
        let w = first_prime_outside(p5, &ex2);
        assert_eq!(w, Prime::poly(Poly::new(5, vec![1, 1])).unwrap()); // t+1
    }
}
