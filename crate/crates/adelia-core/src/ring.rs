//! Tagged exact-arithmetic rings and their elements.
//!
//! The supported families are the ones a semilocal curve needs: Z and F_p[t]
//! with finitely many primes kept integral, their fraction fields, level-s
//! truncated completions, residue-style quotients, and finite products.
//! Completions are represented only through truncations plus a dense
//! rational-representative model; genuine inverse limits never appear.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{is_prime_int, Prime, Scalar, ScalarFamily};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseTag {
    Integers,
    PolyOverPrimeField(u64),
}

impl BaseTag {
    pub fn family(&self) -> ScalarFamily {
        match self {
            BaseTag::Integers => ScalarFamily::Rational,
            BaseTag::PolyOverPrimeField(p) => ScalarFamily::RationalFunction(*p),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    IntegersModN(BigInt),
    PrimeField(u64),
    PolyOverPrimeField(u64),
    RationalFunctionField(u64),
    SemilocalPID { base: BaseTag, primes: Vec<Prime> },
    FractionField(Box<RingSpec>),
    TruncatedCompletion { base: Box<RingSpec>, prime: Prime, level: u32 },
    LocalFractionModel { base: Box<RingSpec>, prime: Prime },
    FiniteProduct(Vec<RingSpec>),
}

impl RingSpec {
    pub fn integers_mod(n: i64) -> Result<RingSpec> {
        if n < 2 {
            return Err(Error::Invalid(format!("modulus {n} must be >= 2")));
        }
        Ok(RingSpec::IntegersModN(BigInt::from(n)))
    }

    pub fn prime_field(p: u64) -> Result<RingSpec> {
        if !is_prime_int(&BigInt::from(p)) {
            return Err(Error::InvalidPrime(p.to_string()));
        }
        Ok(RingSpec::PrimeField(p))
    }

    /// Semilocal PID: the base with all primes outside `primes` inverted.
    pub fn semilocal(base: BaseTag, primes: Vec<Prime>) -> Result<RingSpec> {
        if primes.is_empty() {
            return Err(Error::EmptyPrimeSet);
        }
        let mut seen: Vec<Prime> = Vec::new();
        for q in &primes {
            if q.family() != base.family() {
                return Err(Error::RingMismatch(format!(
                    "prime {q} does not live over {base:?}"
                )));
            }
            if seen.contains(q) {
                return Err(Error::DuplicatePrime(q.to_string()));
            }
            seen.push(q.clone());
        }
        Ok(RingSpec::SemilocalPID { base, primes })
    }

    pub fn fraction_field_of(base: RingSpec) -> Result<RingSpec> {
        match base {
            RingSpec::SemilocalPID { .. } => Ok(RingSpec::FractionField(Box::new(base))),
            other => Err(Error::UnsupportedFamily(format!(
                "fraction field only of semilocal PIDs, got {other}"
            ))),
        }
    }

    pub fn truncated(base: RingSpec, prime: Prime, level: u32) -> Result<RingSpec> {
        if level < 1 {
            return Err(Error::Invalid("truncation level must be >= 1".into()));
        }
        match &base {
            RingSpec::SemilocalPID { primes, .. } if primes.contains(&prime) => {
                Ok(RingSpec::TruncatedCompletion { base: Box::new(base), prime, level })
            }
            _ => Err(Error::BadPrime(prime.to_string())),
        }
    }

    pub fn local_fraction(base: RingSpec, prime: Prime) -> Result<RingSpec> {
        match &base {
            RingSpec::SemilocalPID { primes, .. } if primes.contains(&prime) => {
                Ok(RingSpec::LocalFractionModel { base: Box::new(base), prime })
            }
            _ => Err(Error::BadPrime(prime.to_string())),
        }
    }

    pub fn product(components: Vec<RingSpec>) -> Result<RingSpec> {
        if components.is_empty() {
            return Err(Error::Invalid("finite product must be nonempty".into()));
        }
        let fam = components[0].family()?;
        for c in &components[1..] {
            if c.family()? != fam {
                return Err(Error::RingMismatch("mixed-family product".into()));
            }
        }
        Ok(RingSpec::FiniteProduct(components))
    }

    /// The fraction field family this ring's elements lift to.
    pub fn family(&self) -> Result<ScalarFamily> {
        match self {
            RingSpec::Integers
            | RingSpec::Rationals
            | RingSpec::IntegersModN(_)
            | RingSpec::PrimeField(_) => Ok(ScalarFamily::Rational),
            RingSpec::PolyOverPrimeField(p) | RingSpec::RationalFunctionField(p) => {
                Ok(ScalarFamily::RationalFunction(*p))
            }
            RingSpec::SemilocalPID { base, .. } => Ok(base.family()),
            RingSpec::FractionField(b)
            | RingSpec::TruncatedCompletion { base: b, .. }
            | RingSpec::LocalFractionModel { base: b, .. } => b.family(),
            RingSpec::FiniteProduct(cs) => cs[0].family(),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(
            self,
            RingSpec::Rationals
                | RingSpec::PrimeField(_)
                | RingSpec::RationalFunctionField(_)
                | RingSpec::FractionField(_)
                | RingSpec::LocalFractionModel { .. }
        )
    }

    /// The PID context used for Smith normal form and module invariants.
    /// Quotient-style rings flatten to the PID of their base; the quotient
    /// relations come from `extra_relation_scalar`.
    pub fn base_pid(&self) -> Result<Pid> {
        match self {
            RingSpec::Integers | RingSpec::IntegersModN(_) | RingSpec::PrimeField(_) => Ok(Pid::Int),
            RingSpec::Rationals => Ok(Pid::Field(ScalarFamily::Rational)),
            RingSpec::PolyOverPrimeField(p) => Ok(Pid::Poly(*p)),
            RingSpec::RationalFunctionField(p) => {
                Ok(Pid::Field(ScalarFamily::RationalFunction(*p)))
            }
            RingSpec::SemilocalPID { base, primes } => match base {
                BaseTag::Integers => Ok(Pid::IntLocal(
                    primes
                        .iter()
                        .map(|q| match q {
                            Prime::Int(n) => n.clone(),
                            Prime::Poly(_) => unreachable!(),
                        })
                        .collect(),
                )),
                BaseTag::PolyOverPrimeField(p) => Ok(Pid::PolyLocal(
                    *p,
                    primes
                        .iter()
                        .map(|q| match q {
                            Prime::Poly(f) => f.clone(),
                            Prime::Int(_) => unreachable!(),
                        })
                        .collect(),
                )),
            },
            RingSpec::FractionField(_) | RingSpec::LocalFractionModel { .. } => {
                Ok(Pid::Field(self.family()?))
            }
            RingSpec::TruncatedCompletion { base, .. } => base.base_pid(),
            RingSpec::FiniteProduct(_) => Err(Error::NonPidRing(self.to_string())),
        }
    }

    /// Per-generator relation forced by the ring itself (n for Z/n, q^s for
    /// truncated completions); None for honest subrings of the fraction field.
    pub fn extra_relation_scalar(&self) -> Option<Scalar> {
        match self {
            RingSpec::IntegersModN(n) => Some(Scalar::from_bigint(n.clone())),
            RingSpec::PrimeField(p) => Some(Scalar::from_int(*p as i64)),
            RingSpec::TruncatedCompletion { prime, level, .. } => {
                Some(prime.pow_scalar(*level))
            }
            _ => None,
        }
    }

    /// Prime set of a semilocal PID (or of the base of a derived ring).
    pub fn primes(&self) -> Option<&[Prime]> {
        match self {
            RingSpec::SemilocalPID { primes, .. } => Some(primes),
            RingSpec::TruncatedCompletion { base, .. }
            | RingSpec::LocalFractionModel { base, .. }
            | RingSpec::FractionField(base) => base.primes(),
            _ => None,
        }
    }

    /// Canonical representative for an element of this ring; errors when the
    /// scalar does not represent an element (bad denominator, wrong family).
    pub fn normalize(&self, x: Scalar) -> Result<Scalar> {
        if x.family() != self.family()? {
            return Err(Error::RingMismatch(format!(
                "scalar {x} does not live in {self}"
            )));
        }
        match self {
            RingSpec::Integers | RingSpec::PolyOverPrimeField(_) => {
                if x.is_integral() {
                    Ok(x)
                } else {
                    Err(Error::RingMismatch(format!("{x} is not integral")))
                }
            }
            RingSpec::Rationals | RingSpec::RationalFunctionField(_) | RingSpec::FractionField(_) => Ok(x),
            RingSpec::LocalFractionModel { .. } => Ok(x),
            RingSpec::IntegersModN(n) => reduce_mod(&x, &Scalar::from_bigint(n.clone())),
            RingSpec::PrimeField(p) => reduce_mod(&x, &Scalar::from_int(*p as i64)),
            RingSpec::SemilocalPID { primes, .. } => {
                if x.is_zero() {
                    return Ok(x);
                }
                for q in primes {
                    if q.valuation(&x)? < 0 {
                        return Err(Error::RingMismatch(format!(
                            "{x} has a pole at {q}, not in {self}"
                        )));
                    }
                }
                Ok(x)
            }
            RingSpec::TruncatedCompletion { prime, level, .. } => {
                // an element of O_q/m_q^s; any lift whose denominator is
                // invertible mod q^s represents one
                reduce_mod(&x, &prime.pow_scalar(*level))
            }
            RingSpec::FiniteProduct(_) => Err(Error::RingMismatch(
                "product elements are componentwise".into(),
            )),
        }
    }
}

/// Canonical residue of an integral scalar modulo `m`: integer in [0, m) or
/// polynomial of degree < deg m. Semilocal lifts with unit denominators are
/// cleared first (the denominator is invertible modulo m).
fn reduce_mod(x: &Scalar, m: &Scalar) -> Result<Scalar> {
    match (x, m) {
        (Scalar::Rat(r), Scalar::Rat(mm)) => {
            let md = mm.numer();
            let inv = mod_inverse(r.denom(), md).ok_or_else(|| {
                Error::RingMismatch(format!("denominator of {x} not invertible mod {m}"))
            })?;
            Ok(Scalar::from_bigint((r.numer() * inv).mod_floor(md)))
        }
        (Scalar::Fun(f), Scalar::Fun(mf)) => {
            let md = &mf.num;
            let (g, u, _) = f.den.xgcd(md);
            if g != Poly::one(g.p) {
                return Err(Error::RingMismatch(format!(
                    "denominator of {x} not invertible mod {m}"
                )));
            }
            Ok(Scalar::from_poly(f.num.mul(&u).rem(md)))
        }
        _ => Err(Error::RingMismatch("mixed scalar families".into())),
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::IntegersModN(n) => write!(f, "Z/{n}"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
            RingSpec::PolyOverPrimeField(p) => write!(f, "F{p}[t]"),
            RingSpec::RationalFunctionField(p) => write!(f, "F{p}(t)"),
            RingSpec::SemilocalPID { base, primes } => {
                let ps: Vec<String> = primes.iter().map(|q| q.to_string()).collect();
                match base {
                    BaseTag::Integers => write!(f, "Z_({})", ps.join(",")),
                    BaseTag::PolyOverPrimeField(p) => write!(f, "F{p}[t]_({})", ps.join(",")),
                }
            }
            RingSpec::FractionField(b) => write!(f, "Frac({b})"),
            RingSpec::TruncatedCompletion { base, prime, level } => {
                write!(f, "{base}/({prime})^{level}")
            }
            RingSpec::LocalFractionModel { base, prime } => {
                write!(f, "FracModel({base} at {prime})")
            }
            RingSpec::FiniteProduct(cs) => {
                let ps: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", ps.join(" x "))
            }
        }
    }
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element tagged with its owning ring, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    pub ring: RingSpec,
    pub value: Scalar,
}

impl RingElement {
    pub fn new(ring: RingSpec, value: Scalar) -> Result<RingElement> {
        let value = ring.normalize(value)?;
        Ok(RingElement { ring, value })
    }

    pub fn zero(ring: RingSpec) -> RingElement {
        let fam = ring.family().expect("elementless ring");
        RingElement { value: Scalar::zero(fam), ring }
    }

    pub fn one(ring: RingSpec) -> RingElement {
        let fam = ring.family().expect("elementless ring");
        let value = ring.normalize(Scalar::one(fam)).expect("1 in ring");
        RingElement { ring, value }
    }

    fn check(&self, o: &RingElement) -> Result<()> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, o.ring)))
        }
    }

    pub fn add(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        RingElement::new(self.ring.clone(), self.value.add(&o.value))
    }

    pub fn sub(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        RingElement::new(self.ring.clone(), self.value.sub(&o.value))
    }

    pub fn mul(&self, o: &RingElement) -> Result<RingElement> {
        self.check(o)?;
        RingElement::new(self.ring.clone(), self.value.mul(&o.value))
    }

    pub fn neg(&self) -> RingElement {
        RingElement::new(self.ring.clone(), self.value.neg()).expect("negation stays in ring")
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Free-standing valuation operation: v_q(x) for nonzero x of Q or F_p(t).
pub fn valuation(x: &Scalar, q: &Prime) -> Result<i64> {
    q.valuation(x)
}

/// PID arithmetic context for Smith normal form. Fields count as the trivial
/// case where every nonzero element is a unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pid {
    Int,
    IntLocal(Vec<BigInt>),
    Poly(u64),
    PolyLocal(u64, Vec<Poly>),
    Field(ScalarFamily),
}

impl Pid {
    pub fn family(&self) -> ScalarFamily {
        match self {
            Pid::Int | Pid::IntLocal(_) => ScalarFamily::Rational,
            Pid::Poly(p) | Pid::PolyLocal(p, _) => ScalarFamily::RationalFunction(*p),
            Pid::Field(f) => *f,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        if x.family() != self.family() {
            return false;
        }
        if x.is_zero() {
            return true;
        }
        match self {
            Pid::Int | Pid::Poly(_) => x.is_integral(),
            Pid::IntLocal(ps) => match x {
                Scalar::Rat(r) => ps.iter().all(|p| !r.denom().is_multiple_of(p)),
                _ => false,
            },
            Pid::PolyLocal(_, qs) => match x {
                Scalar::Fun(f) => qs.iter().all(|q| !q.divides(&f.den)),
                _ => false,
            },
            Pid::Field(_) => true,
        }
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        if x.is_zero() || !self.contains(x) {
            return false;
        }
        match self {
            Pid::Int => x.as_bigint().map(|n| n.abs().is_one()).unwrap_or(false),
            Pid::Poly(_) => match x {
                Scalar::Fun(f) => f.is_poly() && f.num.is_constant(),
                _ => false,
            },
            Pid::IntLocal(_) | Pid::PolyLocal(_, _) => {
                self.tracked_primes().iter().all(|q| q.valuation(x).unwrap() == 0)
            }
            Pid::Field(_) => true,
        }
    }

    fn tracked_primes(&self) -> Vec<Prime> {
        match self {
            Pid::IntLocal(ps) => ps.iter().cloned().map(Prime::Int).collect(),
            Pid::PolyLocal(_, qs) => qs.iter().cloned().map(Prime::Poly).collect(),
            _ => vec![],
        }
    }

    /// Canonical generator of the ideal (x): positive for Z, monic for
    /// F_p[t], a product of tracked prime powers for localizations, 1 in a
    /// field. Returns (canonical, unit) with x = unit * canonical.
    pub fn normalize_unit(&self, x: &Scalar) -> (Scalar, Scalar) {
        if x.is_zero() {
            return (x.clone(), Scalar::one(self.family()));
        }
        match self {
            Pid::Int => {
                let n = x.as_bigint().expect("integral");
                if n.is_negative() {
                    (Scalar::from_bigint(-n), Scalar::from_int(-1))
                } else {
                    (x.clone(), Scalar::from_int(1))
                }
            }
            Pid::Poly(p) => match x {
                Scalar::Fun(f) => {
                    let lead = f.num.leading();
                    let canon = Scalar::from_poly(f.num.monic());
                    (canon, Scalar::from_poly(Poly::constant(*p, lead)))
                }
                _ => unreachable!(),
            },
            Pid::IntLocal(_) | Pid::PolyLocal(_, _) => {
                let mut canon = Scalar::one(self.family());
                for q in self.tracked_primes() {
                    let v = q.valuation(x).unwrap();
                    debug_assert!(v >= 0, "element outside localization");
                    canon = canon.mul(&q.pow_scalar(v as u32));
                }
                let unit = x.div(&canon).unwrap();
                (canon, unit)
            }
            Pid::Field(fam) => (Scalar::one(*fam), x.clone()),
        }
    }

    pub fn canonical(&self, x: &Scalar) -> Scalar {
        self.normalize_unit(x).0
    }

    pub fn divides(&self, a: &Scalar, b: &Scalar) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        match b.div(a) {
            Some(q) => self.contains(&q),
            None => false,
        }
    }

    /// b / a when a | b in the ring.
    pub fn exact_div(&self, b: &Scalar, a: &Scalar) -> Option<Scalar> {
        let q = b.div(a)?;
        if self.contains(&q) {
            Some(q)
        } else {
            None
        }
    }

    /// Extended gcd: (g, u, v) with u*a + v*b = g and g canonical.
    pub fn xgcd(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar, Scalar) {
        let fam = self.family();
        let one = Scalar::one(fam);
        let zero = Scalar::zero(fam);
        if a.is_zero() && b.is_zero() {
            return (zero.clone(), one, zero);
        }
        if b.is_zero() {
            let (g, unit) = self.normalize_unit(a);
            return (g, unit.inv().unwrap(), zero);
        }
        if a.is_zero() {
            let (g, unit) = self.normalize_unit(b);
            return (g, zero, unit.inv().unwrap());
        }
        match self {
            Pid::Int => {
                let (x, y) = (a.as_bigint().unwrap(), b.as_bigint().unwrap());
                let e = x.extended_gcd(&y);
                let (mut g, mut u, mut v) = (e.gcd, e.x, e.y);
                if g.is_negative() {
                    g = -g;
                    u = -u;
                    v = -v;
                }
                (Scalar::from_bigint(g), Scalar::from_bigint(u), Scalar::from_bigint(v))
            }
            Pid::Poly(_) => match (a, b) {
                (Scalar::Fun(fa), Scalar::Fun(fb)) => {
                    let (g, u, v) = fa.num.xgcd(&fb.num);
                    (Scalar::from_poly(g), Scalar::from_poly(u), Scalar::from_poly(v))
                }
                _ => unreachable!(),
            },
            Pid::IntLocal(_) | Pid::PolyLocal(_, _) => {
                // g = prod q^min(v_q a, v_q b); Bezout through the integral cores
                let mut g = one.clone();
                let mut core_a = one.clone();
                let mut core_b = one.clone();
                for q in self.tracked_primes() {
                    let va = q.valuation(a).unwrap();
                    let vb = q.valuation(b).unwrap();
                    let m = va.min(vb);
                    g = g.mul(&q.pow_scalar(m as u32));
                    core_a = core_a.mul(&q.pow_scalar((va - m) as u32));
                    core_b = core_b.mul(&q.pow_scalar((vb - m) as u32));
                }
                // core_a, core_b are coprime in the base PID
                let base = match self {
                    Pid::IntLocal(_) => Pid::Int,
                    Pid::PolyLocal(p, _) => Pid::Poly(*p),
                    _ => unreachable!(),
                };
                let (g0, u0, v0) = base.xgcd(&core_a, &core_b);
                debug_assert!(base.is_unit(&g0) || g0.is_one());
                // u0*core_a + v0*core_b = g0 (a unit); rescale so the rhs is 1
                let g0_inv = g0.inv().unwrap();
                let unit_a = a.div(&g.mul(&core_a)).unwrap();
                let unit_b = b.div(&g.mul(&core_b)).unwrap();
                let u = u0.mul(&g0_inv).div(&unit_a).unwrap();
                let v = v0.mul(&g0_inv).div(&unit_b).unwrap();
                (g, u, v)
            }
            Pid::Field(_) => (one, a.inv().unwrap(), zero),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z23() -> RingSpec {
        RingSpec::semilocal(
            BaseTag::Integers,
            vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn semilocal_validation() {
        assert_eq!(
            RingSpec::semilocal(BaseTag::Integers, vec![]),
            Err(Error::EmptyPrimeSet)
        );
        assert!(matches!(
            RingSpec::semilocal(
                BaseTag::Integers,
                vec![Prime::int(2).unwrap(), Prime::int(2).unwrap()]
            ),
            Err(Error::DuplicatePrime(_))
        ));
    }

    #[test]
    fn semilocal_membership() {
        let r = z23();
        // 1/5 is in Z_(2,3); 1/2 is not
        assert!(r.normalize(Scalar::from_int(1).div(&Scalar::from_int(5)).unwrap()).is_ok());
        assert!(r.normalize(Scalar::from_int(1).div(&Scalar::from_int(2)).unwrap()).is_err());
    }

    #[test]
    fn truncation_residues() {
        let r = z23();
        let t = RingSpec::truncated(r, Prime::int(2).unwrap(), 3).unwrap();
        // 36 mod 8 = 4; 1/3 mod 8 = 3 (inverse of 3 mod 8)
        assert_eq!(t.normalize(Scalar::from_int(36)).unwrap(), Scalar::from_int(4));
        let third = Scalar::from_int(1).div(&Scalar::from_int(3)).unwrap();
        assert_eq!(t.normalize(third).unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn xgcd_in_semilocal() {
        let pid = z23().base_pid().unwrap();
        // gcd(36, 8) in Z_(2,3) is 4 (the 2-part min is 2, the 3-part min 0)
        let (g, u, v) = pid.xgcd(&Scalar::from_int(36), &Scalar::from_int(8));
        assert_eq!(g, Scalar::from_int(4));
        let lhs = u.mul(&Scalar::from_int(36)).add(&v.mul(&Scalar::from_int(8)));
        assert_eq!(lhs, g);
        assert!(pid.contains(&u) && pid.contains(&v));
    }

    #[test]
    fn normalize_unit_semilocal() {
        let pid = z23().base_pid().unwrap();
        // 45 = 9 * 5, and 5 is a unit of Z_(2,3)
        let (c, u) = pid.normalize_unit(&Scalar::from_int(45));
        assert_eq!(c, Scalar::from_int(9));
        assert_eq!(u, Scalar::from_int(5));
        assert!(pid.is_unit(&u));
    }

    #[test]
    fn element_arithmetic_closed() {
        let r = z23();
        let a = RingElement::new(r.clone(), Scalar::from_int(7).div(&Scalar::from_int(5)).unwrap()).unwrap();
        let b = RingElement::new(r.clone(), Scalar::from_int(3)).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.value, Scalar::from_int(22).div(&Scalar::from_int(5)).unwrap());
        assert!(a.mul(&b).is_ok());
    }
}
