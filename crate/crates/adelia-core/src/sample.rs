//! Seeded random generators for property suites. Every sampler takes an
//! explicit RNG so a run with a fixed seed is fully deterministic.

use crate::matrix::Mat;
use crate::module::PresentedModule;
use crate::ring::{Pid, RingSpec};
use crate::scalar::{Prime, Scalar, ScalarFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Stream of independent RNGs derived from one seed, one per instance, so
/// instances can be reordered or parallelized without changing their draws.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A nonzero scalar of the PID with small valuations at the tracked primes.
pub fn small_integral(pid: &Pid, rng: &mut ChaCha8Rng) -> Scalar {
    match pid {
        Pid::Int => Scalar::from_int(rng.gen_range(-50..=50)),
        Pid::Poly(p) => {
            let deg = rng.gen_range(0..=3);
            let coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..*p)).collect();
            Scalar::from_poly(crate::poly::Poly::new(*p, coeffs))
        }
        Pid::IntLocal(_) | Pid::PolyLocal(_, _) => {
            // product of tracked prime powers times a unit
            let primes = tracked(pid);
            let mut x = unit_of(pid, rng);
            for q in primes {
                let e = rng.gen_range(0..=3);
                x = x.mul(&q.pow_scalar(e));
            }
            x
        }
        Pid::Field(f) => nonzero_field_element(*f, rng),
    }
}

fn tracked(pid: &Pid) -> Vec<Prime> {
    match pid {
        Pid::IntLocal(ps) => ps.iter().cloned().map(Prime::Int).collect(),
        Pid::PolyLocal(_, qs) => qs.iter().cloned().map(Prime::Poly).collect(),
        _ => vec![],
    }
}

/// A unit of the localization: valuation zero at every tracked prime.
pub fn unit_of(pid: &Pid, rng: &mut ChaCha8Rng) -> Scalar {
    let primes = tracked(pid);
    loop {
        let (num, den) = match pid.family() {
            ScalarFamily::Rational => (
                Scalar::from_int(rng.gen_range(-30i64..=30)),
                Scalar::from_int(rng.gen_range(1i64..=30)),
            ),
            ScalarFamily::RationalFunction(p) => {
                let rand_poly = |rng: &mut ChaCha8Rng| {
                    let deg = rng.gen_range(0..=2);
                    let coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
                    Scalar::from_poly(crate::poly::Poly::new(p, coeffs))
                };
                (rand_poly(rng), rand_poly(rng))
            }
        };
        if num.is_zero() || den.is_zero() {
            continue;
        }
        let x = num.div(&den).unwrap();
        if primes.iter().all(|q| q.valuation(&x).unwrap() == 0) {
            return x;
        }
    }
}

pub fn nonzero_field_element(fam: ScalarFamily, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let x = match fam {
            ScalarFamily::Rational => {
                let n = rng.gen_range(-60i64..=60);
                let d = rng.gen_range(1i64..=60);
                Scalar::from_int(n).div(&Scalar::from_int(d)).unwrap()
            }
            ScalarFamily::RationalFunction(p) => {
                let poly = |rng: &mut ChaCha8Rng, lo: usize| {
                    let deg = rng.gen_range(lo..=2);
                    Scalar::from_poly(crate::poly::Poly::new(
                        p,
                        (0..=deg).map(|_| rng.gen_range(0..p)).collect(),
                    ))
                };
                let n = poly(rng, 0);
                let d = poly(rng, 0);
                if d.is_zero() {
                    continue;
                }
                n.div(&d).unwrap()
            }
        };
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random nonzero rational (or rational function) with valuations in a
/// modest range at the given primes — an idele component.
pub fn idele_component(primes: &[Prime], rng: &mut ChaCha8Rng) -> Scalar {
    let fam = primes[0].family();
    let mut x = loop {
        let u = nonzero_field_element(fam, rng);
        if primes.iter().all(|q| q.valuation(&u).unwrap() == 0) {
            break u;
        }
    };
    for q in primes {
        let e: i64 = rng.gen_range(-3..=3);
        let pw = q.pow_scalar(e.unsigned_abs() as u32);
        x = if e >= 0 { x.mul(&pw) } else { x.div(&pw).unwrap() };
    }
    x
}

/// Random unimodular matrix: a product of elementary row operations.
pub fn random_unimodular(pid: &Pid, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let fam = pid.family();
    let mut m = Mat::identity(fam, n);
    if n == 0 {
        return m;
    }
    let steps = rng.gen_range(n..=3 * n + 2);
    for _ in 0..steps {
        match rng.gen_range(0..3u8) {
            0 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                m.swap_rows(i, j);
            }
            1 => {
                // scale a row by a unit
                let i = rng.gen_range(0..n);
                let u = match pid {
                    Pid::Int | Pid::Poly(_) => Scalar::int_in_family(fam, if rng.gen() { 1 } else { -1 }),
                    _ => unit_of(pid, rng),
                };
                for j in 0..n {
                    m[(i, j)] = m[(i, j)].mul(&u);
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i == j {
                    continue;
                }
                let c = small_integral(pid, rng);
                for k in 0..n {
                    let add = c.mul(&m[(j, k)]);
                    m[(i, k)] = m[(i, k)].add(&add);
                }
            }
        }
    }
    m
}

/// Random finite-length module over a semilocal PID: a diagonal of tracked
/// prime powers hidden behind unimodular changes of presentation.
pub fn random_finite_length_module(
    ring: &RingSpec,
    rng: &mut ChaCha8Rng,
    max_exp: u32,
) -> PresentedModule {
    let pid = ring.base_pid().expect("pid");
    let primes = tracked(&pid);
    assert!(!primes.is_empty(), "finite length needs a tracked prime set");
    let g = rng.gen_range(1..=3usize);
    let fam = pid.family();
    let mut diag = Vec::new();
    for _ in 0..g {
        let mut d = Scalar::one(fam);
        for q in &primes {
            let e = rng.gen_range(0..=max_exp);
            d = d.mul(&q.pow_scalar(e));
        }
        diag.push(d);
    }
    let d = Mat::diagonal(fam, &diag);
    let l = random_unimodular(&pid, g, rng);
    let r = random_unimodular(&pid, g, rng);
    let rels = l.mul(&d).mul(&r);
    PresentedModule::new(ring.clone(), g, rels).expect("valid presentation")
}

/// Random finitely generated abelian group (as a Z-module), possibly with
/// free rank, for the generic limit suites.
pub fn random_fg_abelian(rng: &mut ChaCha8Rng) -> PresentedModule {
    let g = rng.gen_range(1..=3usize);
    let relcount = rng.gen_range(0..=g);
    let mut rows = Vec::new();
    for _ in 0..relcount {
        rows.push((0..g).map(|_| Scalar::from_int(rng.gen_range(-8..=8))).collect());
    }
    let rels = if rows.is_empty() {
        Mat::zeros(ScalarFamily::Rational, 0, g)
    } else {
        Mat::from_rows(ScalarFamily::Rational, rows)
    };
    PresentedModule::new(RingSpec::Integers, g, rels).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseTag;

    #[test]
    fn unimodular_has_unit_determinant() {
        let ring = RingSpec::semilocal(
            BaseTag::Integers,
            vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()],
        )
        .unwrap();
        let pid = ring.base_pid().unwrap();
        let mut rng = rng_for(7, 0);
        for _ in 0..20 {
            let m = random_unimodular(&pid, 3, &mut rng);
            assert!(pid.is_unit(&m.det()));
        }
    }

    #[test]
    fn finite_length_sampler_is_finite_length() {
        let ring = RingSpec::semilocal(
            BaseTag::Integers,
            vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()],
        )
        .unwrap();
        let mut rng = rng_for(7, 1);
        for _ in 0..20 {
            let m = random_finite_length_module(&ring, &mut rng, 3);
            assert!(m.is_finite_length().unwrap());
        }
    }
}
