//! Smith normal form over the supported PID families, with unimodular
//! transforms, and the solvers built on it (lattice membership, left
//! kernels). This is the exactness substrate everything else stands on.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Pid;
use crate::scalar::Scalar;

/// U * M * V = D with U, V unimodular and D diagonal with d1 | d2 | ...
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
}

impl Snf {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows.min(self.d.cols);
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form by extended-gcd elimination.
pub fn smith(m: &Mat, pid: &Pid) -> Result<Snf> {
    for row in m.rows_iter() {
        for x in row {
            if !pid.contains(x) {
                return Err(Error::NonPidRing(format!(
                    "entry {x} does not lie in the PID context"
                )));
            }
        }
    }
    let (r, c) = (m.rows, m.cols);
    let fam = m.family;
    let mut d = m.clone();
    let mut u = Mat::identity(fam, r);
    let mut v = Mat::identity(fam, c);

    // row op: R_i <- alpha R_k + beta R_i applied jointly to d and u
    let row_combine = |d: &mut Mat, u: &mut Mat, k: usize, i: usize, t: &[Scalar; 4]| {
        // rows k, i <- (t0 Rk + t1 Ri, t2 Rk + t3 Ri)
        for m in [d, u].into_iter() {
            for j in 0..m.cols {
                let a = m[(k, j)].clone();
                let b = m[(i, j)].clone();
                m[(k, j)] = t[0].mul(&a).add(&t[1].mul(&b));
                m[(i, j)] = t[2].mul(&a).add(&t[3].mul(&b));
            }
        }
    };
    let col_combine = |d: &mut Mat, v: &mut Mat, k: usize, j: usize, t: &[Scalar; 4]| {
        for m in [d, v].into_iter() {
            for i in 0..m.rows {
                let a = m[(i, k)].clone();
                let b = m[(i, j)].clone();
                m[(i, k)] = t[0].mul(&a).add(&t[2].mul(&b));
                m[(i, j)] = t[1].mul(&a).add(&t[3].mul(&b));
            }
        }
    };

    for k in 0..r.min(c) {
        'pivot: loop {
            // locate a pivot in the trailing block
            let mut pivot = None;
            'search: for i in k..r {
                for j in k..c {
                    if !d[(i, j)].is_zero() {
                        pivot = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'pivot };
            d.swap_rows(pi, k);
            u.swap_rows(pi, k);
            d.swap_cols(pj, k);
            v.swap_cols(pj, k);

            loop {
                // clear the pivot column with unimodular row operations
                for i in k + 1..r {
                    if d[(i, k)].is_zero() {
                        continue;
                    }
                    let a = d[(k, k)].clone();
                    let b = d[(i, k)].clone();
                    if let Some(q) = pid.exact_div(&b, &a) {
                        let t = [
                            Scalar::one(fam),
                            Scalar::zero(fam),
                            q.neg(),
                            Scalar::one(fam),
                        ];
                        row_combine(&mut d, &mut u, k, i, &t);
                    } else {
                        let (g, x, y) = pid.xgcd(&a, &b);
                        let t = [
                            x,
                            y,
                            pid.exact_div(&b, &g).unwrap().neg(),
                            pid.exact_div(&a, &g).unwrap(),
                        ];
                        row_combine(&mut d, &mut u, k, i, &t);
                    }
                }
                // clear the pivot row with unimodular column operations
                let mut col_dirtied = false;
                for j in k + 1..c {
                    if d[(k, j)].is_zero() {
                        continue;
                    }
                    let a = d[(k, k)].clone();
                    let b = d[(k, j)].clone();
                    if let Some(q) = pid.exact_div(&b, &a) {
                        let t = [
                            Scalar::one(fam),
                            q.neg(),
                            Scalar::zero(fam),
                            Scalar::one(fam),
                        ];
                        col_combine(&mut d, &mut v, k, j, &t);
                    } else {
                        let (g, x, y) = pid.xgcd(&a, &b);
                        let t = [
                            x,
                            pid.exact_div(&b, &g).unwrap().neg(),
                            y,
                            pid.exact_div(&a, &g).unwrap(),
                        ];
                        col_combine(&mut d, &mut v, k, j, &t);
                        col_dirtied = true;
                    }
                }
                if !col_dirtied && (k + 1..r).all(|i| d[(i, k)].is_zero()) {
                    break;
                }
            }

            // divisibility fix-up: the pivot must divide the trailing block
            let mut offender = None;
            'div: for i in k + 1..r {
                for j in k + 1..c {
                    if !pid.divides(&d[(k, k)], &d[(i, j)]) {
                        offender = Some(i);
                        break 'div;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // fold the offending row into row k and re-reduce
                    let t = [
                        Scalar::one(fam),
                        Scalar::one(fam),
                        Scalar::zero(fam),
                        Scalar::one(fam),
                    ];
                    row_combine(&mut d, &mut u, k, i, &t);
                }
                None => break 'pivot,
            }
        }
        // canonical pivot: positive / monic / product of tracked primes
        if !d[(k, k)].is_zero() {
            let (_, unit) = pid.normalize_unit(&d[(k, k)]);
            if !unit.is_one() {
                let inv = unit.inv().unwrap();
                for j in 0..c {
                    d[(k, j)] = d[(k, j)].mul(&inv);
                }
                for j in 0..u.cols {
                    u[(k, j)] = u[(k, j)].mul(&inv);
                }
            }
        }
    }
    Ok(Snf { u, d, v })
}

/// Invariant factors of coker(M): (free rank, non-unit factors in order).
pub fn cokernel_invariants(m: &Mat, pid: &Pid) -> Result<(usize, Vec<Scalar>)> {
    let snf = smith(m, pid)?;
    let rank = snf.rank();
    let factors = snf
        .diagonal()
        .into_iter()
        .take(rank)
        .filter(|x| !pid.is_unit(x))
        .collect();
    Ok((m.cols - rank, factors))
}

/// Basis (as rows) of { z : z * M = 0 }.
pub fn left_kernel(m: &Mat, pid: &Pid) -> Result<Mat> {
    let snf = smith(m, pid)?;
    let rank = snf.rank();
    if rank == m.rows {
        return Ok(Mat::zeros(m.family, 0, m.rows));
    }
    let rows: Vec<Vec<Scalar>> = (rank..m.rows).map(|i| snf.u.row_vec(i)).collect();
    Ok(Mat::from_rows(m.family, rows))
}

/// One solution z of z * M = b over the PID, if any.
pub fn solve_left(m: &Mat, b: &[Scalar], pid: &Pid) -> Result<Option<Vec<Scalar>>> {
    assert_eq!(b.len(), m.cols, "rhs length mismatch");
    let snf = smith(m, pid)?;
    // z*M = b  <=>  y*D = b*V with z = y*U
    let bv: Vec<Scalar> = (0..m.cols)
        .map(|j| {
            let mut acc = Scalar::zero(m.family);
            for (k, bk) in b.iter().enumerate() {
                acc = acc.add(&bk.mul(&snf.v[(k, j)]));
            }
            acc
        })
        .collect();
    let n = m.rows.min(m.cols);
    let mut y = vec![Scalar::zero(m.family); m.rows];
    for (j, bj) in bv.iter().enumerate() {
        if j < n && !snf.d[(j, j)].is_zero() {
            match pid.exact_div(bj, &snf.d[(j, j)]) {
                Some(q) => y[j] = q,
                None => return Ok(None),
            }
        } else if !bj.is_zero() {
            return Ok(None);
        }
    }
    let z: Vec<Scalar> = (0..m.rows)
        .map(|j| {
            let mut acc = Scalar::zero(m.family);
            for (k, yk) in y.iter().enumerate() {
                acc = acc.add(&yk.mul(&snf.u[(k, j)]));
            }
            acc
        })
        .collect();
    Ok(Some(z))
}

/// Whether row vector b lies in the row lattice of M.
pub fn in_row_lattice(m: &Mat, b: &[Scalar], pid: &Pid) -> Result<bool> {
    Ok(solve_left(m, b, pid)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{BaseTag, RingSpec};
    use crate::scalar::{Prime, ScalarFamily};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: determinantal divisors. The k-th invariant factor
    /// is gcd(k-minors)/gcd((k-1)-minors), computed by brute-force minor
    /// enumeration over the integers.
    fn minor_gcd_oracle(m: &Mat) -> Vec<BigInt> {
        fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combinations(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut c = vec![first];
                        c.append(&mut rest);
                        out.push(c);
                    }
                }
            }
            out
        }
        let mut factors = Vec::new();
        let mut prev = BigInt::from(1);
        for k in 1..=m.rows.min(m.cols) {
            let mut g = BigInt::from(0);
            for ri in combinations(m.rows, k) {
                for ci in combinations(m.cols, k) {
                    let mut sub = Mat::zeros(ScalarFamily::Rational, k, k);
                    for (a, &i) in ri.iter().enumerate() {
                        for (b, &j) in ci.iter().enumerate() {
                            sub[(a, b)] = m[(i, j)].clone();
                        }
                    }
                    let det = sub.det().as_bigint().unwrap();
                    g = num_integer::Integer::gcd(&g, &det);
                }
            }
            if g == BigInt::from(0) {
                break;
            }
            factors.push(&g / &prev);
            prev = g;
        }
        factors
    }

    #[test]
    fn snf_frozen_examples() {
        let pid = Pid::Int;
        // diag(2,3) -> diag(1,6); oracle: gcd entries 1, det 6
        let m = Mat::from_int_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            minor_gcd_oracle(&m),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let snf = smith(&m, &pid).unwrap();
        assert_eq!(snf.diagonal(), vec![Scalar::from_int(1), Scalar::from_int(6)]);

        // zero matrix: D = 0, U = V = I
        let z = Mat::zeros(ScalarFamily::Rational, 2, 2);
        let snf = smith(&z, &pid).unwrap();
        assert!(snf.d.is_zero());
        assert_eq!(snf.u, Mat::identity(ScalarFamily::Rational, 2));
        assert_eq!(snf.v, Mat::identity(ScalarFamily::Rational, 2));

        // [[2,4],[6,8]] -> diag(2,4); oracle: gcd entries 2, gcd 2x2 minors 8
        let m = Mat::from_int_rows(&[&[2, 4], &[6, 8]]);
        assert_eq!(
            minor_gcd_oracle(&m),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        let snf = smith(&m, &pid).unwrap();
        assert_eq!(snf.diagonal(), vec![Scalar::from_int(2), Scalar::from_int(4)]);
    }

    fn check_snf(m: &Mat, pid: &Pid) {
        let snf = smith(m, pid).unwrap();
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U*M*V != D");
        assert!(pid.is_unit(&snf.u.det()), "U not unimodular");
        assert!(pid.is_unit(&snf.v.det()), "V not unimodular");
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() || w[0].is_zero() {
                assert!(pid.divides(&w[0], &w[1]), "divisibility chain broken");
            }
        }
        // off-diagonal zero
        for i in 0..snf.d.rows {
            for j in 0..snf.d.cols {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_soundness_random_integer_matrices() {
        // 200 random matrices up to 6x6, entries in [-50, 50]
        let mut rng = ChaCha8Rng::seed_from_u64(0xADE1);
        for _ in 0..200 {
            let r = rng.gen_range(1..=6);
            let c = rng.gen_range(1..=6);
            let mut m = Mat::zeros(ScalarFamily::Rational, r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = Scalar::from_int(rng.gen_range(-50..=50));
                }
            }
            check_snf(&m, &Pid::Int);
            // cross-check the diagonal against the minor-gcd oracle
            let snf = smith(&m, &Pid::Int).unwrap();
            let nonzero: Vec<BigInt> = snf
                .diagonal()
                .into_iter()
                .filter(|x| !x.is_zero())
                .map(|x| x.as_bigint().unwrap())
                .collect();
            assert_eq!(nonzero, minor_gcd_oracle(&m));
        }
    }

    #[test]
    fn snf_over_semilocal_localization() {
        let r = RingSpec::semilocal(
            BaseTag::Integers,
            vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()],
        )
        .unwrap();
        let pid = r.base_pid().unwrap();
        // 45 = 9*unit, 8 = 8: gcd is 1 in Z_(2,3)? no: v2(45)=0,v3(45)=2; v2(8)=3,v3(8)=0
        let m = Mat::from_int_rows(&[&[45, 0], &[0, 8]]);
        let snf = smith(&m, &pid).unwrap();
        check_snf(&m, &pid);
        assert_eq!(snf.diagonal(), vec![Scalar::from_int(1), Scalar::from_int(72)]);
    }

    #[test]
    fn snf_over_poly() {
        use crate::poly::Poly;
        let p = 5;
        let fam = ScalarFamily::RationalFunction(p);
        let t = Scalar::from_poly(Poly::t(p));
        let t1 = Scalar::from_poly(Poly::new(p, vec![4, 1])); // t-1
        let m = Mat::from_rows(
            fam,
            vec![vec![t.clone(), Scalar::zero(fam)], vec![Scalar::zero(fam), t1.clone()]],
        );
        let pid = Pid::Poly(p);
        check_snf(&m, &pid);
        let snf = smith(&m, &pid).unwrap();
        assert_eq!(snf.diagonal()[0], Scalar::one(fam));
        assert_eq!(snf.diagonal()[1], t.mul(&t1));
    }

    #[test]
    fn left_kernel_and_solve() {
        let pid = Pid::Int;
        // rows (1,2,3), (2,4,6): kernel generated by (2,-1)
        let m = Mat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = left_kernel(&m, &pid).unwrap();
        assert_eq!(k.rows, 1);
        let prod = k.mul(&m);
        assert!(prod.is_zero());

        let b = vec![Scalar::from_int(3), Scalar::from_int(6), Scalar::from_int(9)];
        let z = solve_left(&m, &b, &pid).unwrap().unwrap();
        let mut check = vec![Scalar::from_int(0); 3];
        for j in 0..3 {
            for (i, zi) in z.iter().enumerate() {
                check[j] = check[j].add(&zi.mul(&m[(i, j)]));
            }
        }
        assert_eq!(check, b);

        let b_bad = vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0)];
        assert!(solve_left(&m, &b_bad, &pid).unwrap().is_none());
    }
}
