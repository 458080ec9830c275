//! Finite point posets of desk-scale schemes: flag enumeration, dimension
//! stratification, and the fibration from cube subsets to semi-simplex
//! objects with its canonical lifts.
//!
//! Indexing convention: the dimension label of a point is its closure
//! dimension, so on a curve the generic point carries 1 and closed points
//! carry 0. Posets come from builders, never from ring presentations.

use crate::error::{Error, Result};
use crate::ring::{BaseTag, RingSpec};
use crate::scalar::Prime;
use std::collections::BTreeMap;
use std::fmt;

pub type PointId = usize;

#[derive(Clone)]
pub struct SchemePoints {
    pub names: Vec<String>,
    pub dim: Vec<usize>,
    /// le[i][j]: point i is a specialization of j (i lies in the closure of j).
    le: Vec<Vec<bool>>,
    /// Prime-ideal generator per point; None at the generic point and on
    /// synthetic posets.
    pub local_prime: Vec<Option<Prime>>,
    pub base_ring: Option<RingSpec>,
    pub n: usize,
}

impl SchemePoints {
    pub fn point_count(&self) -> usize {
        self.names.len()
    }

    pub fn le(&self, a: PointId, b: PointId) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: PointId, b: PointId) -> bool {
        a != b && self.le[a][b]
    }

    pub fn points_of_dim(&self, d: usize) -> Vec<PointId> {
        (0..self.point_count()).filter(|&p| self.dim[p] == d).collect()
    }

    pub fn generic_point(&self) -> Option<PointId> {
        let tops = self.points_of_dim(self.n);
        (tops.len() == 1).then(|| tops[0])
    }

    pub fn has_ring_data(&self) -> bool {
        self.base_ring.is_some()
    }
}

impl fmt::Debug for SchemePoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poset[n={}] {{", self.n)?;
        for p in 0..self.point_count() {
            write!(f, " {}({})", self.names[p], self.dim[p])?;
        }
        write!(f, " }}")
    }
}

/// A chain of specializations p0 <= ... <= pr; reduced means strict.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Flag {
    pub chain: Vec<PointId>,
    pub reduced: bool,
}

impl Flag {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn display(&self, x: &SchemePoints) -> String {
        let parts: Vec<&str> = self.chain.iter().map(|&p| x.names[p].as_str()).collect();
        format!("({})", parts.join("<"))
    }
}

/// Strictly increasing tuple of closure dimensions; indexes a stratum
/// A(i0,...,ir) and doubles as a nonempty subset of [n].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DimensionType(pub Vec<usize>);

impl DimensionType {
    pub fn new(indices: Vec<usize>) -> Result<DimensionType> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!(
                "dimension type {indices:?} is not strictly increasing"
            )));
        }
        Ok(DimensionType(indices))
    }

    pub fn arity(&self) -> usize {
        self.0.len() - 1
    }

    pub fn max_index(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }
}

impl fmt::Display for DimensionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Semilocal curve: one generic point over one closed point per prime.
pub fn build_semilocal_curve(base: BaseTag, primes: Vec<Prime>) -> Result<SchemePoints> {
    let ring = RingSpec::semilocal(base, primes.clone())?;
    let k = primes.len();
    let mut names: Vec<String> = primes.iter().map(|q| format!("({q})")).collect();
    names.push("eta".into());
    let mut dim = vec![0usize; k];
    dim.push(1);
    let total = k + 1;
    let mut le = vec![vec![false; total]; total];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        if i < k {
            row[k] = true; // every closed point specializes from eta
        }
    }
    let mut local_prime: Vec<Option<Prime>> = primes.into_iter().map(Some).collect();
    local_prime.push(None);
    Ok(SchemePoints { names, dim, le, local_prime, base_ring: Some(ring), n: 1 })
}

/// Synthetic poset from explicit strict relations; no ring data, usable by
/// the combinatorial and limit layers only.
pub fn build_synthetic_poset(
    n: usize,
    points: Vec<(String, usize)>,
    relations: Vec<(usize, usize)>,
) -> Result<SchemePoints> {
    let total = points.len();
    let (names, dim): (Vec<String>, Vec<usize>) = points.into_iter().unzip();
    if dim.iter().copied().max().unwrap_or(0) != n {
        return Err(Error::DimensionViolation(format!(
            "declared dimension {n} does not match the maximal label"
        )));
    }
    let mut le = vec![vec![false; total]; total];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in &relations {
        if a >= total || b >= total {
            return Err(Error::Invalid(format!("relation ({a},{b}) out of range")));
        }
        if dim[a] >= dim[b] {
            return Err(Error::DimensionViolation(format!(
                "{} < {} but dims are {} >= {}",
                names[a], names[b], dim[a], dim[b]
            )));
        }
        le[a][b] = true;
    }
    // transitive closure
    for k in 0..total {
        for i in 0..total {
            if le[i][k] {
                for j in 0..total {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    // antisymmetry: a cycle would force a <= b <= a with a != b
    for i in 0..total {
        for j in 0..total {
            if i != j && le[i][j] && le[j][i] {
                return Err(Error::NotAPartialOrder(format!(
                    "{} and {} are mutually comparable",
                    names[i], names[j]
                )));
            }
        }
    }
    // dimension must strictly increase along the closure too
    for i in 0..total {
        for j in 0..total {
            if i != j && le[i][j] && dim[i] >= dim[j] {
                return Err(Error::DimensionViolation(format!(
                    "{} < {} with dims {} >= {}",
                    names[i], names[j], dim[i], dim[j]
                )));
            }
        }
    }
    Ok(SchemePoints { names, dim, le, local_prime: vec![None; total], base_ring: None, n })
}

/// Complete enumeration of S_r(X) or S_r^red(X).
pub fn flags(x: &SchemePoints, r: usize, reduced: bool) -> Vec<Flag> {
    let mut out = Vec::new();
    let mut chain = Vec::with_capacity(r + 1);
    fn extend(
        x: &SchemePoints,
        r: usize,
        reduced: bool,
        chain: &mut Vec<PointId>,
        out: &mut Vec<Flag>,
    ) {
        if chain.len() == r + 1 {
            out.push(Flag { chain: chain.clone(), reduced });
            return;
        }
        for p in 0..x.point_count() {
            let ok = match chain.last() {
                None => true,
                Some(&last) => {
                    if reduced {
                        x.lt(last, p)
                    } else {
                        x.le(last, p)
                    }
                }
            };
            if ok {
                chain.push(p);
                extend(x, r, reduced, chain, out);
                chain.pop();
            }
        }
    }
    extend(x, r, reduced, &mut chain, &mut out);
    out.sort();
    out
}

/// Partition of reduced flags by their tuple of closure dimensions.
pub fn stratify(
    flags: &[Flag],
    x: &SchemePoints,
) -> Result<BTreeMap<DimensionType, Vec<Flag>>> {
    let mut out: BTreeMap<DimensionType, Vec<Flag>> = BTreeMap::new();
    for f in flags {
        if !f.reduced || !f.chain.windows(2).all(|w| x.lt(w[0], w[1])) {
            return Err(Error::UnreducedFlag(f.display(x)));
        }
        let ty = DimensionType::new(f.chain.iter().map(|&p| x.dim[p]).collect())?;
        out.entry(ty).or_default().push(f.clone());
    }
    Ok(out)
}

/// The fibration c_n on objects: a nonempty subset maps to [|S|-1].
pub fn cube_to_simplex(s: &[usize]) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(s.len() - 1)
}

/// A strictly order-preserving injection [r] -> [r'], stored by its values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Injection(pub Vec<usize>);

impl Injection {
    pub fn new(values: Vec<usize>, codomain_arity: usize) -> Result<Injection> {
        if !values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("{values:?} is not strictly increasing")));
        }
        if values.iter().any(|&v| v > codomain_arity) {
            return Err(Error::ArityMismatch(format!(
                "{values:?} does not land in [{codomain_arity}]"
            )));
        }
        Ok(Injection(values))
    }

    pub fn identity(r: usize) -> Injection {
        Injection((0..=r).collect())
    }

    /// Coface d^k: [r-1] -> [r], omitting position k.
    pub fn coface(r: usize, k: usize) -> Injection {
        assert!(k <= r);
        Injection((0..=r).filter(|&i| i != k).collect())
    }

    pub fn src_arity(&self) -> usize {
        self.0.len() - 1
    }

    pub fn compose_after(&self, first: &Injection) -> Injection {
        // self o first
        Injection(first.0.iter().map(|&k| self.0[k]).collect())
    }
}

/// The canonical Cartesian lift: T nonempty with |T| = r'+1, alpha an
/// injection [r] -> [r']; the lift selects the alpha-indexed elements of T.
pub fn cartesian_lift(t: &[usize], alpha: &Injection) -> Result<Vec<usize>> {
    if t.is_empty() {
        return Err(Error::EmptySubset);
    }
    let rp = cube_to_simplex(t)?;
    if alpha.0.iter().any(|&v| v > rp) {
        return Err(Error::ArityMismatch(format!(
            "injection {:?} does not target [{rp}]",
            alpha.0
        )));
    }
    Ok(alpha.0.iter().map(|&k| t[k]).collect())
}

/// Uniqueness half of the Cartesian property, checked by brute force: any
/// competing subset S' of T mapping to alpha∘beta factors uniquely through
/// the canonical lift.
pub fn cartesian_lift_is_universal(t: &[usize], alpha: &Injection) -> Result<bool> {
    let s = cartesian_lift(t, alpha)?;
    // enumerate all nonempty subsets s' of t with an injection beta into
    // the source arity of alpha such that s' includes into t via alpha∘beta
    let r = alpha.src_arity();
    for mask in 1u32..(1 << t.len()) {
        let sp: Vec<usize> = (0..t.len()).filter(|&i| mask >> i & 1 == 1).map(|i| t[i]).collect();
        let sarity = sp.len() - 1;
        if sarity > r {
            continue;
        }
        // betas: injections [sarity] -> [r]
        for beta in injections(sarity, r) {
            let composite = alpha.compose_after(&beta);
            // does s' -> t realize alpha∘beta? i.e. sp = composite-indexed t
            let realized: Vec<usize> = composite.0.iter().map(|&k| t[k]).collect();
            if realized != sp {
                continue;
            }
            // there must be exactly one injection gamma with s'(k) = s[gamma(k)]
            // and it must be beta
            let gammas: Vec<Injection> = injections(sarity, cube_to_simplex(&s)?)
                .into_iter()
                .filter(|g| g.0.iter().map(|&k| s[k]).collect::<Vec<_>>() == sp)
                .collect();
            if gammas.len() != 1 || gammas[0] != beta {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All strictly increasing maps [r] -> [rp].
pub fn injections(r: usize, rp: usize) -> Vec<Injection> {
    fn rec(next_min: usize, left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Injection>) {
        if left == 0 {
            out.push(Injection(cur.clone()));
            return;
        }
        for v in next_min..=max {
            if max + 1 - v < left {
                break;
            }
            cur.push(v);
            rec(v + 1, left - 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r > rp {
        return out;
    }
    rec(0, r + 1, rp, &mut Vec::new(), &mut out);
    out
}

/// All nonempty subsets of {0..=n}, as sorted vectors.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << (n + 1)) {
        out.push((0..=n).filter(|&i| mask >> i & 1 == 1).collect());
    }
    out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve23() -> SchemePoints {
        build_semilocal_curve(
            BaseTag::Integers,
            vec![Prime::int(2).unwrap(), Prime::int(3).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn curve_builder_shape() {
        let x = curve23();
        assert_eq!(x.point_count(), 3);
        assert_eq!(x.dim, vec![0, 0, 1]);
        assert!(x.lt(0, 2) && x.lt(1, 2) && !x.le(0, 1));
        assert_eq!(x.generic_point(), Some(2));

        let f5 = build_semilocal_curve(
            BaseTag::PolyOverPrimeField(5),
            vec![
                Prime::poly(crate::poly::Poly::t(5)).unwrap(),
                Prime::poly(crate::poly::Poly::new(5, vec![4, 1])).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(f5.point_count(), 3);

        assert!(matches!(
            build_semilocal_curve(BaseTag::Integers, vec![]),
            Err(Error::EmptyPrimeSet)
        ));
    }

    #[test]
    fn synthetic_poset_validation() {
        // valid 3-chain a(0) < b(1) < c(2)
        let p = build_synthetic_poset(
            2,
            vec![("a".into(), 0), ("b".into(), 1), ("c".into(), 2)],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert!(p.lt(0, 2)); // transitivity

        // equal dims along a relation
        let bad = build_synthetic_poset(
            2,
            vec![("a".into(), 1), ("b".into(), 1), ("c".into(), 2)],
            vec![(0, 1), (1, 2)],
        );
        assert!(matches!(bad, Err(Error::DimensionViolation(_))));
    }

    #[test]
    fn flag_enumeration_on_curve() {
        let x = curve23();
        let red1 = flags(&x, 1, true);
        assert_eq!(red1.len(), 2); // ((2),eta), ((3),eta)
        assert!(red1.iter().all(|f| f.chain[1] == 2));

        assert!(flags(&x, 2, true).is_empty()); // dimension 1

        let unred1 = flags(&x, 1, false);
        assert_eq!(unred1.len(), 5); // 2 strict + 3 constant chains
    }

    #[test]
    fn stratification_partition() {
        let x = curve23();
        let s1 = flags(&x, 1, true);
        let strata = stratify(&s1, &x).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(strata[&DimensionType::new(vec![0, 1]).unwrap()].len(), 2);

        let s0 = flags(&x, 0, true);
        let strata = stratify(&s0, &x).unwrap();
        assert_eq!(strata[&DimensionType::new(vec![0]).unwrap()].len(), 2);
        assert_eq!(strata[&DimensionType::new(vec![1]).unwrap()].len(), 1);

        // unreduced flag rejected
        let mix = flags(&x, 1, false);
        assert!(matches!(stratify(&mix, &x), Err(Error::UnreducedFlag(_))));
    }

    #[test]
    fn synthetic_dim2_strata() {
        // two closed points under one curve point under one surface point
        let p = build_synthetic_poset(
            2,
            vec![
                ("x".into(), 0),
                ("y".into(), 0),
                ("c".into(), 1),
                ("s".into(), 2),
            ],
            vec![(0, 2), (1, 2), (2, 3)],
        )
        .unwrap();
        let s1 = flags(&p, 1, true);
        let strata = stratify(&s1, &p).unwrap();
        let keys: Vec<DimensionType> = strata.keys().cloned().collect();
        assert_eq!(
            keys,
            vec![
                DimensionType::new(vec![0, 1]).unwrap(),
                DimensionType::new(vec![0, 2]).unwrap(),
                DimensionType::new(vec![1, 2]).unwrap(),
            ]
        );
        // S_2^red has 2 flags: x<c<s and y<c<s
        assert_eq!(flags(&p, 2, true).len(), 2);
    }

    #[test]
    fn cube_to_simplex_cardinality() {
        assert_eq!(cube_to_simplex(&[0, 2, 5]).unwrap(), 2);
        assert_eq!(cube_to_simplex(&[3]).unwrap(), 0);
        assert_eq!(cube_to_simplex(&[0, 1]).unwrap(), 1);
        assert_eq!(cube_to_simplex(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn cartesian_lift_examples() {
        // T = {0,2,5}, alpha = face [1]->[2] omitting position 1: S = {0,5}
        let alpha = Injection::coface(2, 1);
        assert_eq!(cartesian_lift(&[0, 2, 5], &alpha).unwrap(), vec![0, 5]);

        // identity lift is T itself
        let id = Injection::identity(2);
        assert_eq!(cartesian_lift(&[0, 2, 5], &id).unwrap(), vec![0, 2, 5]);

        // face omitting position 0 on {0,1,2}: S = {1,2}
        let alpha = Injection::coface(2, 0);
        assert_eq!(cartesian_lift(&[0, 1, 2], &alpha).unwrap(), vec![1, 2]);
    }

    #[test]
    fn lift_transitivity_random() {
        // lift(T, alpha∘beta) = lift(lift(T, alpha), beta)
        for n in 1..=4usize {
            for t in nonempty_subsets(n) {
                let rp = t.len() - 1;
                for r in 0..=rp {
                    for alpha in injections(r, rp) {
                        for rr in 0..=r {
                            for beta in injections(rr, r) {
                                let once = cartesian_lift(&t, &alpha.compose_after(&beta)).unwrap();
                                let s = cartesian_lift(&t, &alpha).unwrap();
                                let twice = cartesian_lift(&s, &beta).unwrap();
                                assert_eq!(once, twice);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lift_universal_property_bruteforce() {
        for n in 1..=3usize {
            for t in nonempty_subsets(n) {
                let rp = t.len() - 1;
                for r in 0..=rp {
                    for alpha in injections(r, rp) {
                        assert!(cartesian_lift_is_universal(&t, &alpha).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn nondegeneracy_bound() {
        // S_r^red(X) empty for r > n
        let x = curve23();
        for r in 2..5 {
            assert!(flags(&x, r, true).is_empty());
        }
    }
}
