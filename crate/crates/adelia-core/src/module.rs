//! Finitely presented modules as relation matrices, and maps between them.
//!
//! A module is coker of its relation rows inside R^gens. Rings whose
//! definition carries a quotient (Z/n, truncated completions) contribute
//! implicit relations, so invariants are always computed over the honest
//! PID underneath. Isomorphism is decided on (rank, invariant factors),
//! which classifies finitely generated modules over every supported PID.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{Pid, RingSpec};
use crate::scalar::{Prime, Scalar};
use crate::snf::{cokernel_invariants, in_row_lattice, left_kernel, smith, solve_left};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct PresentedModule {
    pub ring: RingSpec,
    pub gens: usize,
    pub rels: Mat,
}

/// Isomorphism-invariant descriptor: free rank and the invariant factors
/// (positive integers / monic polynomials / products of tracked primes).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Invariants {
    pub rank: usize,
    pub factors: Vec<Scalar>,
}

impl Invariants {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn to_string_short(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("free^{}", self.rank));
        }
        for f in &self.factors {
            parts.push(format!("R/({f})"));
        }
        parts.join(" + ")
    }
}

impl PresentedModule {
    pub fn new(ring: RingSpec, gens: usize, rels: Mat) -> Result<PresentedModule> {
        if rels.cols != gens {
            return Err(Error::Invalid(format!(
                "relation width {} does not match {} generators",
                rels.cols, gens
            )));
        }
        let fam = ring.family()?;
        if rels.family != fam {
            return Err(Error::RingMismatch("relation entries in wrong family".into()));
        }
        let mut canon = rels;
        for i in 0..canon.rows {
            for j in 0..canon.cols {
                canon[(i, j)] = ring.normalize(canon[(i, j)].clone())?;
            }
        }
        Ok(PresentedModule { ring, gens, rels: canon })
    }

    pub fn zero(ring: RingSpec) -> PresentedModule {
        let fam = ring.family().expect("elementless ring");
        PresentedModule { ring, gens: 0, rels: Mat::zeros(fam, 0, 0) }
    }

    pub fn free(ring: RingSpec, rank: usize) -> PresentedModule {
        let fam = ring.family().expect("elementless ring");
        PresentedModule { ring, gens: rank, rels: Mat::zeros(fam, 0, rank) }
    }

    /// coker of a diagonal presentation: R/(d1) + R/(d2) + ...
    pub fn from_diagonal(ring: RingSpec, diag: &[Scalar]) -> Result<PresentedModule> {
        let fam = ring.family()?;
        let rels = Mat::diagonal(fam, diag);
        PresentedModule::new(ring, diag.len(), rels)
    }

    pub fn cyclic(ring: RingSpec, d: Scalar) -> Result<PresentedModule> {
        PresentedModule::from_diagonal(ring, &[d])
    }

    pub fn pid(&self) -> Result<Pid> {
        self.ring.base_pid()
    }

    /// Relation lattice over the underlying PID, including the relations the
    /// ring itself imposes (n for Z/n, q^s for truncations).
    pub fn full_relations(&self) -> Mat {
        match self.ring.extra_relation_scalar() {
            None => self.rels.clone(),
            Some(m) => {
                let extra = Mat::diagonal(self.rels.family, &vec![m; self.gens]);
                self.rels.vstack(&extra)
            }
        }
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let pid = self.pid()?;
        let (rank, factors) = cokernel_invariants(&self.full_relations(), &pid)?;
        Ok(Invariants { rank, factors })
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        Ok(self.invariants()?.is_zero())
    }

    pub fn is_isomorphic(&self, other: &PresentedModule) -> Result<bool> {
        if self.pid()? != other.pid()? {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(self.invariants()? == other.invariants()?)
    }

    /// Finite length over the supported PID families: no free part. Over a
    /// semilocal PID the nonzero factors are automatically supported on the
    /// tracked prime set after canonicalization.
    pub fn is_finite_length(&self) -> Result<bool> {
        let inv = self.invariants()?;
        Ok(inv.rank == 0 && inv.factors.iter().all(|f| !f.is_zero()))
    }

    pub fn direct_sum(&self, other: &PresentedModule) -> Result<PresentedModule> {
        if self.ring != other.ring {
            // allow summing across quotient tags as long as the PID agrees;
            // the sum lives over the common base
            if self.pid()? != other.pid()? {
                return Err(Error::RingMismatch(format!(
                    "{} vs {}",
                    self.ring, other.ring
                )));
            }
        }
        let ring = if self.ring == other.ring {
            self.ring.clone()
        } else {
            common_base_ring(&self.ring)?
        };
        let a = self.full_relations();
        let b = other.full_relations();
        Ok(PresentedModule {
            ring,
            gens: self.gens + other.gens,
            rels: a.block_diag(&b),
        })
    }

    /// Restrict scalars along the canonical map target -> self.ring, folding
    /// quotient relations into the presentation. Sound when the target PID
    /// still tracks the primes the module is supported on: the relation
    /// lattice then presents the same underlying module.
    pub fn restrict_to(&self, ring: RingSpec) -> Result<PresentedModule> {
        let tgt = ring.base_pid()?;
        if self.is_zero_module()? {
            return Ok(PresentedModule::zero(ring));
        }
        let compatible = tgt == self.pid()?
            || match &self.ring {
                RingSpec::TruncatedCompletion { prime, .. } => pid_tracks(&tgt, prime),
                _ => false,
            };
        if !compatible {
            return Err(Error::RingMismatch(format!(
                "cannot restrict {} to {}",
                self.ring, ring
            )));
        }
        Ok(PresentedModule { ring, gens: self.gens, rels: self.full_relations() })
    }

    /// v_q of the annihilator; None when the module has a free part (the
    /// annihilator is zero) or q does not make sense for the family.
    pub fn annihilator_valuation(&self, q: &Prime) -> Result<Option<i64>> {
        let inv = self.invariants()?;
        if inv.rank > 0 || inv.factors.iter().any(|f| f.is_zero()) {
            return Ok(None);
        }
        match inv.factors.last() {
            None => Ok(Some(0)),
            Some(last) => Ok(Some(q.valuation(last)?)),
        }
    }

    /// Base change along a canonical ring map with the same fraction family:
    /// localizations, fraction fields, quotients. Right exact, computed on
    /// the presentation.
    pub fn tensor_to(&self, target: RingSpec) -> Result<PresentedModule> {
        if target.family()? != self.ring.family()? {
            return Err(Error::RingMismatch(format!(
                "no canonical map {} -> {}",
                self.ring, target
            )));
        }
        // carry the source ring's implicit quotient relations along
        let rels = self.full_relations();
        PresentedModule::new(target, self.gens, rels)
    }

    /// Localization at one tracked prime of a semilocal PID.
    pub fn localize_at(&self, q: &Prime) -> Result<PresentedModule> {
        match &self.ring {
            RingSpec::SemilocalPID { base, primes } => {
                if !primes.contains(q) {
                    return Err(Error::BadPrime(q.to_string()));
                }
                self.tensor_to(RingSpec::semilocal(*base, vec![q.clone()])?)
            }
            RingSpec::Integers => {
                self.tensor_to(RingSpec::semilocal(crate::ring::BaseTag::Integers, vec![q.clone()])?)
            }
            RingSpec::PolyOverPrimeField(p) => self.tensor_to(RingSpec::semilocal(
                crate::ring::BaseTag::PolyOverPrimeField(*p),
                vec![q.clone()],
            )?),
            other => Err(Error::UnsupportedFamily(format!("localize over {other}"))),
        }
    }

    /// Level-s truncation M ⊗ R/q^s as a module over the truncated completion.
    pub fn completion_truncate(&self, q: &Prime, s: u32) -> Result<PresentedModule> {
        if s < 1 {
            return Err(Error::Invalid("truncation level must be >= 1".into()));
        }
        let local = match &self.ring {
            RingSpec::SemilocalPID { base, primes } => {
                if !primes.contains(q) {
                    // q is invertible in the ring
                    return Err(Error::BadPrime(q.to_string()));
                }
                RingSpec::semilocal(*base, vec![q.clone()])?
            }
            RingSpec::Integers => {
                RingSpec::semilocal(crate::ring::BaseTag::Integers, vec![q.clone()])?
            }
            RingSpec::PolyOverPrimeField(p) => RingSpec::semilocal(
                crate::ring::BaseTag::PolyOverPrimeField(*p),
                vec![q.clone()],
            )?,
            RingSpec::TruncatedCompletion { base, prime, level } => {
                // tower stage: (M mod q^s') mod q^s = M mod q^min(s,s')
                if prime != q {
                    return Err(Error::BadPrime(q.to_string()));
                }
                let stage = s.min(*level);
                let target = RingSpec::truncated((**base).clone(), q.clone(), stage)?;
                return self.tensor_to(target);
            }
            other => return Err(Error::UnsupportedFamily(format!("truncate over {other}"))),
        };
        let target = RingSpec::truncated(local, q.clone(), s)?;
        self.tensor_to(target)
    }

    /// The stabilized completion at q: M ⊗ R/q^s for any s past the
    /// annihilator valuation. Requires finite length.
    pub fn completion_stabilized(&self, q: &Prime, requested: u32) -> Result<(PresentedModule, u32)> {
        if !self.is_finite_length()? {
            return Err(Error::NotFiniteLength);
        }
        let need = self.annihilator_valuation(q)?.unwrap_or(0).max(1) as u32;
        let level = requested.max(need);
        Ok((self.completion_truncate(q, level)?, level))
    }
}

fn common_base_ring(ring: &RingSpec) -> Result<RingSpec> {
    match ring {
        RingSpec::TruncatedCompletion { base, .. } => Ok((**base).clone()),
        RingSpec::IntegersModN(_) | RingSpec::PrimeField(_) => Ok(RingSpec::Integers),
        other => Ok(other.clone()),
    }
}

/// Whether a PID keeps this prime non-invertible.
fn pid_tracks(pid: &Pid, q: &Prime) -> bool {
    match (pid, q) {
        (Pid::Int, Prime::Int(_)) => true,
        (Pid::Poly(p), Prime::Poly(f)) => *p == f.p,
        (Pid::IntLocal(ps), Prime::Int(n)) => ps.contains(n),
        (Pid::PolyLocal(p, qs), Prime::Poly(f)) => *p == f.p && qs.contains(f),
        _ => false,
    }
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} gens over {}; rels {:?}>", self.gens, self.ring, self.rels)
    }
}

/// A map of presented modules acting on row vectors: x goes to x*mat.
#[derive(Clone)]
pub struct ModuleMap {
    pub src: PresentedModule,
    pub dst: PresentedModule,
    pub mat: Mat,
}

impl ModuleMap {
    pub fn new(src: PresentedModule, dst: PresentedModule, mat: Mat) -> Result<ModuleMap> {
        if mat.rows != src.gens || mat.cols != dst.gens {
            return Err(Error::Invalid(format!(
                "map shape {}x{} does not match {} -> {} generators",
                mat.rows, mat.cols, src.gens, dst.gens
            )));
        }
        if src.pid()? != dst.pid()? {
            return Err(Error::RingMismatch(format!("{} -> {}", src.ring, dst.ring)));
        }
        let map = ModuleMap { src, dst, mat };
        if !map.is_well_defined()? {
            return Err(Error::Invalid("map does not respect relations".into()));
        }
        Ok(map)
    }

    pub fn zero(src: PresentedModule, dst: PresentedModule) -> ModuleMap {
        let fam = src.rels.family;
        let mat = Mat::zeros(fam, src.gens, dst.gens);
        ModuleMap { src, dst, mat }
    }

    pub fn identity(m: &PresentedModule) -> ModuleMap {
        ModuleMap {
            src: m.clone(),
            dst: m.clone(),
            mat: Mat::identity(m.rels.family, m.gens),
        }
    }

    fn is_well_defined(&self) -> Result<bool> {
        let pid = self.src.pid()?;
        let dst_latt = self.dst.full_relations();
        for row in self.src.full_relations().rows_iter() {
            let image: Vec<Scalar> = (0..self.dst.gens)
                .map(|j| {
                    let mut acc = Scalar::zero(self.mat.family);
                    for (k, r) in row.iter().enumerate() {
                        acc = acc.add(&r.mul(&self.mat[(k, j)]));
                    }
                    acc
                })
                .collect();
            if !in_row_lattice(&dst_latt, &image, &pid)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compose(&self, then: &ModuleMap) -> Result<ModuleMap> {
        if self.dst.gens != then.src.gens {
            return Err(Error::Invalid("composition shape mismatch".into()));
        }
        Ok(ModuleMap {
            src: self.src.clone(),
            dst: then.dst.clone(),
            mat: self.mat.mul(&then.mat),
        })
    }

    /// Equality as maps of modules: the difference kills every generator.
    pub fn equals(&self, other: &ModuleMap) -> Result<bool> {
        if self.mat.rows != other.mat.rows || self.mat.cols != other.mat.cols {
            return Ok(false);
        }
        let diff = self.mat.sub(&other.mat);
        let pid = self.src.pid()?;
        let dst_latt = self.dst.full_relations();
        for i in 0..diff.rows {
            if !in_row_lattice(&dst_latt, diff.row(i), &pid)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero_map(&self) -> Result<bool> {
        self.equals(&ModuleMap::zero(self.src.clone(), self.dst.clone()))
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> Result<(PresentedModule, ModuleMap)> {
        let pid = self.src.pid()?;
        let fam = self.mat.family;
        // solutions (x, y): x*mat + y*dst_rels = 0; x spans the preimage of
        // the relation lattice
        let stacked = self.mat.vstack(&self.dst.full_relations());
        let sols = left_kernel(&stacked, &pid)?;
        let xs = sols.submatrix_cols(0..self.src.gens);
        // relations among the kernel generators, taken inside the source
        let k = xs.rows;
        let rel_sols = left_kernel(&xs.vstack(&self.src.full_relations()), &pid)?;
        let krels = rel_sols.submatrix_cols(0..k);
        let kernel = PresentedModule { ring: self.src.ring.clone(), gens: k, rels: krels };
        let incl = ModuleMap { src: kernel.clone(), dst: self.src.clone(), mat: xs };
        debug_assert_eq!(incl.mat.cols, self.src.gens);
        let _ = fam;
        Ok((kernel, incl))
    }

    pub fn cokernel(&self) -> Result<PresentedModule> {
        let rels = self.dst.full_relations().vstack(&self.mat);
        Ok(PresentedModule { ring: self.dst.ring.clone(), gens: self.dst.gens, rels })
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_zero_module()?)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel()?.is_zero_module()
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// (kernel invariants, cokernel invariants) of the comparison map.
    pub fn defect(&self) -> Result<(Invariants, Invariants)> {
        Ok((self.kernel()?.0.invariants()?, self.cokernel()?.invariants()?))
    }

    /// Factor this map through a submodule given by an inclusion whose image
    /// contains the image of self: returns g with g;incl = self.
    pub fn factor_through(&self, incl: &ModuleMap) -> Result<ModuleMap> {
        let pid = self.src.pid()?;
        let ambient_latt = incl.dst.full_relations();
        // solve row_i = z * incl.mat modulo ambient relations
        let stacked = incl.mat.vstack(&ambient_latt);
        let mut rows = Vec::new();
        for i in 0..self.mat.rows {
            let sol = solve_left(&stacked, self.mat.row(i), &pid)?.ok_or_else(|| {
                Error::Invalid("image does not land in the submodule".into())
            })?;
            rows.push(sol[..incl.src.gens].to_vec());
        }
        let mat = if rows.is_empty() {
            Mat::zeros(self.mat.family, 0, incl.src.gens)
        } else {
            Mat::from_rows(self.mat.family, rows)
        };
        Ok(ModuleMap { src: self.src.clone(), dst: incl.src.clone(), mat })
    }
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map {:?} -> {:?} via {:?}", self.src, self.dst, self.mat)
    }
}

/// Smith-normal-form invariants of a finitely presented module (spec name).
pub fn fg_invariants(m: &PresentedModule) -> Result<(usize, Vec<Scalar>)> {
    let inv = m.invariants()?;
    Ok((inv.rank, inv.factors))
}

pub fn module_kernel(f: &ModuleMap) -> Result<PresentedModule> {
    Ok(f.kernel()?.0)
}

pub fn module_cokernel(f: &ModuleMap) -> Result<PresentedModule> {
    f.cokernel()
}

pub fn module_tensor(m: &PresentedModule, target: RingSpec) -> Result<PresentedModule> {
    m.tensor_to(target)
}

pub fn module_localize(m: &PresentedModule, q: &Prime) -> Result<PresentedModule> {
    m.localize_at(q)
}

/// Smith transforms exposed as the spec-level operation.
pub fn smith_normal_form(m: &Mat, ring: &RingSpec) -> Result<crate::snf::Snf> {
    let pid = ring.base_pid()?;
    if matches!(pid, Pid::Field(_)) && !ring.is_field() {
        return Err(Error::NonPidRing(ring.to_string()));
    }
    smith(m, &pid)
}
