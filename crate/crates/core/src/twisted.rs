//! The Γ×S¹ action on C³: twisted elements, twisted subgroups, exact
//! fixed-point subspaces and isotropy enumeration.
//!
//! Phases live in Z_N (an element `k` stands for e^{2πik/N}). Since −Id
//! composed with e^{iπ} is the identity matrix, `(g, k)` and `(−g, k+N/2)`
//! act identically; [`TwistedElement::canonical`] picks one of the two.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{canonical_span, CycloMatrix, CycloVector, Cyclotomic, CyclotomicField};
use crate::group::{all_subgroups, element_order, format_word, FiniteGroup, GroupElement, GroupKind, Subgroup};

pub const DEFAULT_PHASE_DENOMINATOR: u32 = 24;
pub const DEFAULT_ISOTROPY_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error("the zero vector is fixed by all of Γ×S¹")]
    ZeroVector,
    #[error("phase denominator {0} must be a positive multiple of 12")]
    BadDenominator(u32),
    #[error("vector has length {0}, expected 3")]
    BadLength(usize),
}

pub fn check_denominator(n: u32) -> Result<(), TwistedError> {
    if n >= 12 && n % 12 == 0 {
        Ok(())
    } else {
        Err(TwistedError::BadDenominator(n))
    }
}

/// A phase q ∈ Q/Z, stored reduced as `num/den` with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Phase {
    num: u32,
    den: u32,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// The phase k/n, reduced mod 1.
    pub fn new(k: i64, n: u32) -> Phase {
        let n = n as i64;
        let k = k.rem_euclid(n);
        let g = k.gcd(&n);
        Phase {
            num: (k / g) as u32,
            den: (n / g) as u32,
        }
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &Phase) -> Phase {
        let l = self.den.lcm(&other.den);
        Phase::new(
            (self.num * (l / self.den) + other.num * (l / other.den)) as i64,
            l,
        )
    }

    /// Numerator over `n`; `None` if the denominator does not divide `n`.
    pub fn steps(&self, n: u32) -> Option<u32> {
        (n % self.den == 0).then(|| self.num * (n / self.den))
    }

    /// Representative in (−½, ½].
    pub fn signed(&self) -> (i64, u32) {
        let (a, b) = (self.num as i64, self.den);
        if 2 * a > b as i64 {
            (a - b as i64, b)
        } else {
            (a, b)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (a, b) = self.signed();
        a as f64 / b as f64
    }

    /// e^{2πiq} in double precision.
    pub fn numeric(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64)
    }
}

impl fmt::Display for Phase {
    /// Exponential form such as `e^{πi}`, `e^{-πi/2}`, `e^{-2πi/3}`; empty for 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return Ok(());
        }
        let (a, b) = self.signed();
        let (mut p, mut q) = (2 * a, b as i64);
        let g = p.abs().gcd(&q);
        p /= g;
        q /= g;
        let sign = if p < 0 { "-" } else { "" };
        let coef = if p.abs() == 1 { String::new() } else { p.abs().to_string() };
        let den = if q == 1 { String::new() } else { format!("/{q}") };
        write!(f, "e^{{{sign}{coef}πi{den}}}")
    }
}

/// (g, k) acting on C³ as z ↦ e^{2πik/N}·g·z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedElement {
    pub g: GroupElement,
    pub k: u32,
    pub n: u32,
}

impl TwistedElement {
    pub fn new(g: GroupElement, k: i64, n: u32) -> Self {
        TwistedElement {
            g,
            k: k.rem_euclid(n as i64) as u32,
            n,
        }
    }

    pub fn from_phase(g: GroupElement, phase: Phase, n: u32) -> Self {
        let k = phase.steps(n).expect("phase denominator divides N");
        TwistedElement { g, k, n }
    }

    pub fn identity(n: u32) -> Self {
        TwistedElement::new(GroupElement::identity(), 0, n)
    }

    pub fn phase(&self) -> Phase {
        Phase::new(self.k as i64, self.n)
    }

    pub fn mul(&self, rhs: &TwistedElement) -> TwistedElement {
        assert_eq!(self.n, rhs.n, "phase denominators differ");
        TwistedElement::new(self.g.mul(&rhs.g), self.k as i64 + rhs.k as i64, self.n)
    }

    pub fn inverse(&self) -> TwistedElement {
        TwistedElement::new(self.g.inverse(), -(self.k as i64), self.n)
    }

    /// The representative of {(g,k), (−g,k+N/2)} whose matrix has a positive
    /// entry in row 0. Both act by the same 3×3 complex matrix.
    pub fn canonical(&self) -> TwistedElement {
        if self.g.row_entry(0).1 < 0 {
            TwistedElement::new(self.g.neg(), self.k as i64 + self.n as i64 / 2, self.n)
        } else {
            *self
        }
    }

    /// Acts as the identity matrix.
    pub fn acts_trivially(&self) -> bool {
        let c = self.canonical();
        c.g.is_identity() && c.k == 0
    }

    pub fn act_numeric(&self, z: &[Complex64; 3]) -> [Complex64; 3] {
        let ph = self.phase().numeric();
        std::array::from_fn(|i| {
            let (j, s) = self.g.row_entry(i);
            ph * z[j] * s as f64
        })
    }

    pub fn act_exact(&self, field: &CyclotomicField, z: &[Cyclotomic]) -> CycloVector {
        let ph = self.phase_in(field);
        (0..3)
            .map(|i| {
                let (j, s) = self.g.row_entry(i);
                let v = &ph * &z[j];
                if s < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    fn phase_in(&self, field: &CyclotomicField) -> Cyclotomic {
        assert_eq!(field.order() % self.n, 0, "field order must be a multiple of N");
        field.zeta_pow(self.k as i64 * (field.order() / self.n) as i64)
    }

    /// e^{2πik/N}·g as an exact matrix.
    pub fn matrix_exact(&self, field: &CyclotomicField) -> CycloMatrix {
        let ph = self.phase_in(field);
        CycloMatrix::from_fn(3, 3, |i, j| match self.g.matrix()[i][j] {
            0 => field.zero(),
            1 => ph.clone(),
            _ => -&ph,
        })
    }

    /// Complex dimension of Fix by the cycle rule: one dimension for each
    /// cycle of the underlying permutation whose accumulated sign times
    /// phase is 1.
    pub fn cycle_rule_dim(&self) -> usize {
        let mut seen = [false; 3];
        let mut dim = 0;
        for start in 0..3 {
            if seen[start] {
                continue;
            }
            let (mut i, mut len, mut neg) = (start, 0i64, false);
            while !seen[i] {
                seen[i] = true;
                let (j, s) = self.g.row_entry(i);
                neg ^= s < 0;
                len += 1;
                i = j;
            }
            let total = self.k as i64 * len + if neg { self.n as i64 / 2 } else { 0 };
            if total.rem_euclid(self.n as i64) == 0 {
                dim += 1;
            }
        }
        dim
    }

    /// Word form over the group's alphabet with phase prefix, e.g. `e^{-πi/2}T`.
    pub fn display_in(&self, group: &FiniteGroup) -> String {
        let idx = group.index_of(&self.g).expect("element belongs to the group");
        let w = format_word(group.generators(), group.word(idx));
        format!("{}{}", self.phase(), w)
    }
}

/// Fixed-point subspace with an exact basis in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixSubspace {
    pub basis: Vec<CycloVector>,
    pub complex_dim: usize,
    pub real_dim: usize,
}

impl FixSubspace {
    pub fn from_vectors(field: &CyclotomicField, vectors: &[CycloVector]) -> Self {
        let basis = canonical_span(field, vectors, 3);
        let d = basis.len();
        FixSubspace {
            basis,
            complex_dim: d,
            real_dim: 2 * d,
        }
    }

    pub fn whole(field: &CyclotomicField) -> Self {
        let basis: Vec<CycloVector> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        Self::from_vectors(field, &basis)
    }

    pub fn contains(&self, field: &CyclotomicField, v: &[Cyclotomic]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        canonical_span(field, &vs, 3).len() == self.complex_dim
    }

    /// Image under a twisted element; the span is unaffected by the phase.
    pub fn transform(&self, field: &CyclotomicField, g: &GroupElement) -> FixSubspace {
        let t = TwistedElement::new(*g, 0, field.order());
        let imgs: Vec<CycloVector> = self.basis.iter().map(|v| t.act_exact(field, v)).collect();
        FixSubspace::from_vectors(field, &imgs)
    }

    pub fn numeric_basis(&self) -> Vec<[Complex64; 3]> {
        self.basis
            .iter()
            .map(|v| std::array::from_fn(|i| v[i].numeric()))
            .collect()
    }

    /// Parametric form such as `(z1,ωz1,ω²z1)` or `(0,z1,z2)`.
    pub fn pattern(&self) -> String {
        if self.complex_dim == 0 {
            return "(0,0,0)".into();
        }
        let single = self.complex_dim == 1;
        let coords: Vec<String> = (0..3)
            .map(|i| {
                let terms: Vec<String> = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v[i].is_zero())
                    .map(|(p, v)| {
                        let var = if single { "z".to_string() } else { format!("z{}", p + 1) };
                        format!("{}{}", unit_name(&v[i]), var)
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+").replace("+-", "-")
                }
            })
            .collect();
        format!("({})", coords.join(","))
    }
}

/// Compact name of a cyclotomic coefficient: roots of unity get symbolic
/// names, anything else is printed numerically.
fn unit_name(c: &Cyclotomic) -> String {
    let f = c.field();
    let n = f.order() as i64;
    for k in 0..n {
        if &f.zeta_pow(k) == c {
            let q = Phase::new(k, n as u32);
            return match (q.num(), q.den()) {
                (0, _) => String::new(),
                (1, 2) => "-".into(),
                (1, 4) => "i".into(),
                (3, 4) => "-i".into(),
                (1, 3) => "ω".into(),
                (2, 3) => "ω²".into(),
                (1, 6) => "-ω²".into(),
                (5, 6) => "-ω".into(),
                _ => format!("{q}"),
            };
        }
    }
    let z = c.numeric();
    format!("({:.6}{:+.6}i)", z.re, z.im)
}

pub fn fix_of_element(field: &CyclotomicField, t: &TwistedElement) -> FixSubspace {
    let m = t.matrix_exact(field);
    let shifted = CycloMatrix::from_fn(3, 3, |i, j| {
        if i == j {
            m.get(i, j) - &field.one()
        } else {
            m.get(i, j).clone()
        }
    });
    FixSubspace::from_vectors(field, &shifted.kernel_basis())
}

/// Common fixed vectors of a list of twisted elements.
pub fn fix_of_elements(field: &CyclotomicField, elems: &[TwistedElement]) -> FixSubspace {
    if elems.is_empty() {
        return FixSubspace::whole(field);
    }
    let blocks: Vec<CycloMatrix> = elems
        .iter()
        .map(|t| {
            let m = t.matrix_exact(field);
            CycloMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    m.get(i, j) - &field.one()
                } else {
                    m.get(i, j).clone()
                }
            })
        })
        .collect();
    let stacked = CycloMatrix::vstack(&blocks).expect("3-column blocks");
    FixSubspace::from_vectors(field, &stacked.kernel_basis())
}

/// A graph subgroup {(h, Φ(h)) : h ∈ H} of Γ×Z_N.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedSubgroup {
    pub subgroup: Subgroup,
    /// Φ(h) in Z_N, aligned with `subgroup.members()`.
    pub phases: Vec<u32>,
    pub n: u32,
}

impl TwistedSubgroup {
    pub fn trivial_phases(h: &Subgroup, n: u32) -> Self {
        TwistedSubgroup {
            subgroup: h.clone(),
            phases: vec![0; h.order()],
            n,
        }
    }

    /// Build from twisted elements of `group`; `None` if they do not form
    /// a graph subgroup.
    pub fn from_elements(group: &FiniteGroup, elems: &[TwistedElement]) -> Option<Self> {
        let n = elems.first()?.n;
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for t in elems {
            let i = group.index_of(&t.g)?;
            if map.insert(i, t.k).is_some_and(|old| old != t.k) {
                return None;
            }
        }
        let h = Subgroup::from_members(group, map.keys().copied())?;
        let s = TwistedSubgroup {
            phases: h.members().iter().map(|i| map[i]).collect(),
            subgroup: h,
            n,
        };
        s.is_homomorphism(group).then_some(s)
    }

    /// The subgroup of Γ×Z_N generated by the given twisted elements.
    pub fn generated(group: &FiniteGroup, gens: &[TwistedElement], n: u32) -> Option<Self> {
        let mut set: BTreeSet<TwistedElement> = BTreeSet::from([TwistedElement::identity(n)]);
        let mut frontier = vec![TwistedElement::identity(n)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Self::from_elements(group, &set.into_iter().collect::<Vec<_>>())
    }

    pub fn order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn phase_of(&self, member: usize) -> Option<u32> {
        self.subgroup
            .members()
            .binary_search(&member)
            .ok()
            .map(|p| self.phases[p])
    }

    pub fn elements(&self, group: &FiniteGroup) -> Vec<TwistedElement> {
        self.subgroup
            .members()
            .iter()
            .zip(&self.phases)
            .map(|(&m, &k)| TwistedElement::new(*group.element(m), k as i64, self.n))
            .collect()
    }

    pub fn is_homomorphism(&self, group: &FiniteGroup) -> bool {
        let members = self.subgroup.members();
        members.iter().zip(&self.phases).all(|(&a, &pa)| {
            members.iter().zip(&self.phases).all(|(&b, &pb)| {
                self.phase_of(group.mul(a, b)) == Some((pa + pb) % self.n)
            })
        })
    }

    /// K: the members with phase 0.
    pub fn kernel(&self) -> Subgroup {
        let kept: Vec<usize> = self
            .subgroup
            .members()
            .iter()
            .zip(&self.phases)
            .filter(|(_, &k)| k == 0)
            .map(|(&m, _)| m)
            .collect();
        Subgroup::from_members_unchecked(kept)
    }

    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> TwistedSubgroup {
        let mut pairs: Vec<(usize, u32)> = self
            .subgroup
            .members()
            .iter()
            .zip(&self.phases)
            .map(|(&m, &k)| (group.conj(g, m), k))
            .collect();
        pairs.sort_unstable();
        TwistedSubgroup {
            subgroup: Subgroup::from_members_unchecked(pairs.iter().map(|p| p.0).collect()),
            phases: pairs.iter().map(|p| p.1).collect(),
            n: self.n,
        }
    }

    pub fn is_conjugate_to(&self, group: &FiniteGroup, other: &TwistedSubgroup) -> bool {
        self.order() == other.order()
            && (0..group.order()).any(|g| &self.conjugate(group, g) == other)
    }

    /// The set of 3×3 complex matrices this subgroup acts by, in canonical form.
    pub fn matrix_set(&self, group: &FiniteGroup) -> BTreeSet<TwistedElement> {
        self.elements(group).iter().map(TwistedElement::canonical).collect()
    }

    /// Generators (h, Φ(h)) with h running over a short generating set of H.
    pub fn generators(&self, group: &FiniteGroup) -> Vec<TwistedElement> {
        group
            .generators_of(&self.subgroup)
            .into_iter()
            .map(|m| TwistedElement::new(*group.element(m), self.phase_of(m).unwrap() as i64, self.n))
            .collect()
    }

    pub fn generator_strings(&self, group: &FiniteGroup) -> Vec<String> {
        let g = self.generators(group);
        if g.is_empty() {
            return vec!["Id".into()];
        }
        g.iter().map(|t| t.display_in(group)).collect()
    }

    /// Contains (−Id, ½), which acts as the identity matrix.
    pub fn contains_trivial_twist(&self, group: &FiniteGroup) -> bool {
        group
            .index_of(&GroupElement::minus_id())
            .and_then(|i| self.phase_of(i))
            .is_some_and(|k| 2 * k == self.n)
    }

    /// Drop the redundant (−Id, ½) half: among index-2 subgroups H' ⊂ H with
    /// −Id ∉ H' keep the one with the largest phase-0 part, then the most
    /// determinant +1 elements, then the smallest member list. Returns `self`
    /// when no such reduction applies.
    pub fn reduced(&self, group: &FiniteGroup) -> TwistedSubgroup {
        if !self.contains_trivial_twist(group) {
            return self.clone();
        }
        let minus = group.index_of(&GroupElement::minus_id()).unwrap();
        let target = self.order() / 2;
        let mut best: Option<((usize, usize, std::cmp::Reverse<Vec<usize>>), TwistedSubgroup)> = None;
        for cls in all_subgroups_of(group, &self.subgroup) {
            if cls.order() != target || cls.contains(minus) {
                continue;
            }
            let phases: Vec<u32> = cls.members().iter().map(|&m| self.phase_of(m).unwrap()).collect();
            let cand = TwistedSubgroup {
                subgroup: cls.clone(),
                phases,
                n: self.n,
            };
            let kernel = cand.kernel().order();
            let dets = cls
                .members()
                .iter()
                .filter(|&&m| group.element(m).det() == 1)
                .count();
            let key = (kernel, dets, std::cmp::Reverse(cls.members().to_vec()));
            if best.as_ref().is_none_or(|(k, _)| key > *k) {
                best = Some((key, cand));
            }
        }
        best.map(|b| b.1).unwrap_or_else(|| self.clone())
    }

    /// Cyclic as an abstract group after identifying (−Id, ½) with the identity.
    pub fn is_cyclic_as_matrices(&self, group: &FiniteGroup) -> bool {
        let set = self.matrix_set(group);
        let size = set.len();
        set.iter().any(|t| {
            let mut x = *t;
            let mut ord = 1;
            while !x.acts_trivially() {
                x = x.mul(t).canonical();
                ord += 1;
            }
            ord == size
        })
    }
}

/// All subgroups of `group` contained in `h`.
fn all_subgroups_of(group: &FiniteGroup, h: &Subgroup) -> Vec<Subgroup> {
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let mut frontier: Vec<Subgroup> = h.members().iter().map(|&a| group.generated(&[a])).collect();
    found.extend(frontier.iter().cloned());
    while let Some(s) = frontier.pop() {
        for &a in h.members() {
            if s.contains(a) {
                continue;
            }
            let mut gens = s.members().to_vec();
            gens.push(a);
            let t = group.generated(&gens);
            if found.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    found.into_iter().collect()
}

/// Fix of a twisted subgroup, from its generators.
pub fn fix_of_subgroup(field: &CyclotomicField, group: &FiniteGroup, s: &TwistedSubgroup) -> FixSubspace {
    let gens = greedy_generators(group, s);
    fix_of_elements(field, &gens)
}

fn greedy_generators(group: &FiniteGroup, s: &TwistedSubgroup) -> Vec<TwistedElement> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut span = group.trivial();
    for &m in s.subgroup.members() {
        if !span.contains(m) {
            chosen.push(m);
            span = group.generated(&chosen);
        }
    }
    chosen
        .into_iter()
        .map(|m| TwistedElement::new(*group.element(m), s.phase_of(m).unwrap() as i64, s.n))
        .collect()
}

/// All homomorphisms H → Z_N, as phase vectors aligned with H's members.
pub fn circle_homomorphisms(group: &FiniteGroup, h: &Subgroup, n: u32) -> Vec<Vec<u32>> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span = group.trivial();
    for &m in h.members() {
        if !span.contains(m) {
            gens.push(m);
            span = group.generated(&gens);
        }
    }
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| {
            let ord = element_order(group.element(g)) as u32;
            (0..n).filter(|k| (k * ord) % n == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<u32> = choice.iter().zip(&candidates).map(|(&c, v)| v[c]).collect();
        if let Some(phi) = extend_homomorphism(group, h, &gens, &images, n) {
            out.push(phi);
        }
        // odometer over candidate images
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                out.sort();
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn extend_homomorphism(group: &FiniteGroup, h: &Subgroup, gens: &[usize], images: &[u32], n: u32) -> Option<Vec<u32>> {
    let mut phi: BTreeMap<usize, u32> = BTreeMap::from([(0, 0)]);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for (&g, &k) in gens.iter().zip(images) {
            let y = group.mul(x, g);
            let v = (phi[&x] + k) % n;
            match phi.get(&y) {
                Some(&old) if old != v => return None,
                Some(_) => {}
                None => {
                    phi.insert(y, v);
                    queue.push(y);
                }
            }
        }
    }
    let s = TwistedSubgroup {
        subgroup: h.clone(),
        phases: h.members().iter().map(|m| phi[m]).collect(),
        n,
    };
    s.is_homomorphism(group).then_some(s.phases)
}

/// All (g, k) ∈ Γ×Z_N with e^{2πik/N}·g·z = z.
pub fn stabilizer_of_point(
    field: &CyclotomicField,
    group: &FiniteGroup,
    z: &[Cyclotomic],
    n: u32,
) -> Result<TwistedSubgroup, TwistedError> {
    if z.len() != 3 {
        return Err(TwistedError::BadLength(z.len()));
    }
    let Some(lead) = z.iter().position(|c| !c.is_zero()) else {
        return Err(TwistedError::ZeroVector);
    };
    let inv_lead = z[lead].inv().unwrap();
    let scale = field.order() / n;
    let roots: Vec<Cyclotomic> = (0..n as i64).map(|k| field.zeta_pow(k * scale as i64)).collect();
    let mut elems = Vec::new();
    for g in group.elements() {
        let gz = TwistedElement::new(*g, 0, n).act_exact(field, z);
        // need ζ^k·gz = z, i.e. ζ^{-k} = gz_lead / z_lead
        let ratio = &gz[lead] * &inv_lead;
        let Some(k) = roots.iter().position(|r| r == &ratio) else {
            continue;
        };
        let k = (n as usize - k) % n as usize;
        let t = TwistedElement::new(*g, k as i64, n);
        if t.act_exact(field, z) == z {
            elems.push(t);
        }
    }
    Ok(TwistedSubgroup::from_elements(group, &elems).expect("stabilizers are graph subgroups"))
}

/// Isotropy class of the Γ×S¹ action.
#[derive(Clone, Debug)]
pub struct IsotropyRecord {
    /// `None` for the origin, whose isotropy is all of Γ×S¹.
    pub sigma: Option<TwistedSubgroup>,
    pub fix: FixSubspace,
    pub c_axial: bool,
    /// Row letter (a)–(i) of the standard solution-type table.
    pub row: char,
    /// Number of Γ-conjugates of Σ.
    pub conjugates: usize,
}

#[derive(Clone, Debug)]
pub struct IsotropyResult {
    pub records: Vec<IsotropyRecord>,
    /// Disagreements between generic samples, kept for auditing.
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct IsotropyConfig {
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Default for IsotropyConfig {
    fn default() -> Self {
        IsotropyConfig {
            n: DEFAULT_PHASE_DENOMINATOR,
            seed: DEFAULT_ISOTROPY_SEED,
            samples: 3,
        }
    }
}

/// Random integer combination of the Fix basis with coefficients in [−10, 10].
fn generic_point(field: &CyclotomicField, fix: &FixSubspace, rng: &mut ChaCha8Rng) -> CycloVector {
    let mut z = vec![field.zero(); 3];
    for v in &fix.basis {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-10i64..=10);
        }
        let c = field.from_int(c);
        for (zi, vi) in z.iter_mut().zip(v) {
            *zi = &*zi + &(&c * vi);
        }
    }
    z
}

/// Every isotropy subgroup of Γ×S¹ up to conjugacy, including the origin.
pub fn enumerate_isotropy(group: &FiniteGroup, config: &IsotropyConfig) -> Result<IsotropyResult, TwistedError> {
    check_denominator(config.n)?;
    let n = config.n;
    let field = CyclotomicField::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut warnings = Vec::new();
    let mut found: Vec<(TwistedSubgroup, FixSubspace)> = Vec::new();
    for cls in all_subgroups(group) {
        let h = &cls.representative;
        for phases in circle_homomorphisms(group, h, n) {
            let sigma = TwistedSubgroup {
                subgroup: h.clone(),
                phases,
                n,
            };
            let fix = fix_of_subgroup(&field, group, &sigma);
            if fix.complex_dim == 0 {
                continue;
            }
            let mut stabs: Vec<BTreeSet<TwistedElement>> = Vec::new();
            for _ in 0..config.samples.max(1) {
                let z = generic_point(&field, &fix, &mut rng);
                let st = stabilizer_of_point(&field, group, &z, n)?;
                stabs.push(st.elements(group).into_iter().collect());
            }
            if stabs.windows(2).any(|w| w[0] != w[1]) {
                warnings.push(format!(
                    "generic samples disagree for H of order {} with Fix {}",
                    h.order(),
                    fix.pattern()
                ));
            }
            let common: BTreeSet<TwistedElement> = stabs
                .iter()
                .skip(1)
                .fold(stabs[0].clone(), |acc, s| acc.intersection(s).copied().collect());
            let own: BTreeSet<TwistedElement> = sigma.elements(group).into_iter().collect();
            if common != own {
                continue;
            }
            if found.iter().any(|(s, _)| s.is_conjugate_to(group, &sigma)) {
                continue;
            }
            found.push((sigma, fix));
        }
    }
    let mut records: Vec<IsotropyRecord> = found
        .into_iter()
        .map(|(sigma, fix)| {
            let conj: BTreeSet<TwistedSubgroup> =
                (0..group.order()).map(|g| sigma.conjugate(group, g)).collect();
            IsotropyRecord {
                row: row_letter(group, &sigma, &fix),
                c_axial: fix.real_dim == 2,
                conjugates: conj.len(),
                sigma: Some(sigma),
                fix,
            }
        })
        .collect();
    records.push(IsotropyRecord {
        sigma: None,
        fix: FixSubspace::from_vectors(&field, &[]),
        c_axial: false,
        row: 'a',
        conjugates: 1,
    });
    records.sort_by_key(|r| r.row);
    Ok(IsotropyResult { records, warnings })
}

/// Row letter from intrinsic data: Fix dimension, the size of Σ as a matrix
/// group, cyclicity, and (in dimension 4) whether Σ contains a diagonal
/// matrix other than ±Id.
pub fn row_letter(group: &FiniteGroup, sigma: &TwistedSubgroup, fix: &FixSubspace) -> char {
    match fix.real_dim {
        0 => 'a',
        6 => 'i',
        4 => {
            let diag = sigma
                .matrix_set(group)
                .iter()
                .any(|t| t.g.is_diagonal() && !t.g.is_identity() && t.g != GroupElement::minus_id());
            if diag {
                'g'
            } else {
                'h'
            }
        }
        2 => match sigma.matrix_set(group).len() {
            8 => 'b',
            6 => 'c',
            3 => 'd',
            4 if sigma.is_cyclic_as_matrices(group) => 'f',
            4 => 'e',
            _ => '?',
        },
        _ => '?',
    }
}

pub fn row_name(row: char) -> &'static str {
    match row {
        'a' => "Origin",
        'b' => "Pure mode",
        'c' | 'e' => "Standing wave",
        'd' | 'f' => "Rotating wave",
        'g' | 'h' => "2-Sphere solutions",
        'i' => "General solutions",
        _ => "Unclassified",
    }
}

/// Express a set of matrices e^{2πik/N}·g inside `target`×Z_N. Each matrix
/// is taken with every lift (g, k) or (−g, k+N/2) that lies in the target.
pub fn reinterpret(matrices: &BTreeSet<TwistedElement>, target: &FiniteGroup) -> Option<TwistedSubgroup> {
    let mut elems = Vec::new();
    for t in matrices {
        let flipped = TwistedElement::new(t.g.neg(), t.k as i64 + t.n as i64 / 2, t.n);
        for cand in [*t, flipped] {
            if target.index_of(&cand.g).is_some() {
                elems.push(cand);
            }
        }
    }
    elems.sort();
    elems.dedup();
    TwistedSubgroup::from_elements(target, &elems)
}

/// Preferred lift of a single matrix into `target`: phase 0 first, then
/// determinant +1.
pub fn preferred_lift(t: &TwistedElement, target: &FiniteGroup) -> Option<TwistedElement> {
    let flipped = TwistedElement::new(t.g.neg(), t.k as i64 + t.n as i64 / 2, t.n);
    let mut lifts: Vec<TwistedElement> = [*t, flipped]
        .into_iter()
        .filter(|c| target.index_of(&c.g).is_some())
        .collect();
    lifts.sort_by_key(|c| (c.k != 0, c.g.det() != 1));
    lifts.first().copied()
}

/// Set equality of the matrices e^{2πik/N}·g, i.e. equality as subgroups of O(6).
pub fn twisted_group_equal(a: &[TwistedElement], b: &[TwistedElement]) -> bool {
    let ca: BTreeSet<TwistedElement> = a.iter().map(TwistedElement::canonical).collect();
    let cb: BTreeSet<TwistedElement> = b.iter().map(TwistedElement::canonical).collect();
    ca == cb
}

/// Γ × Z_N as a list of twisted elements.
pub fn full_twisted_group(group: &FiniteGroup, n: u32) -> Vec<TwistedElement> {
    group
        .elements()
        .iter()
        .flat_map(|g| (0..n).map(move |k| TwistedElement::new(*g, k as i64, n)))
        .collect()
}

/// Generators of a record, written in the alphabet of `kind`, after the
/// (−Id, ½) reduction.
pub fn generator_words_in(group_of_record: &FiniteGroup, sigma: &TwistedSubgroup, kind: GroupKind) -> Vec<String> {
    let target = kind.build();
    let mats = sigma.matrix_set(group_of_record);
    let lifted = reinterpret(&mats, &target).expect("the three extended groups coincide as matrix groups");
    let red = lifted.reduced(&target);
    let gens = red.generators(&target);
    if gens.is_empty() {
        return vec!["Id".into()];
    }
    gens.iter()
        .map(|t| preferred_lift(t, &target).unwrap().display_in(&target))
        .collect()
}

/// Graphviz lattice of isotropy classes, each node labelled with its row letter.
pub fn isotropy_dot(group: &FiniteGroup, records: &[IsotropyRecord], title: &str) -> String {
    let mut out = format!("digraph \"{title}\" {{\n  rankdir=TB;\n  node [shape=box];\n");
    for r in records {
        let gens = match &r.sigma {
            Some(s) => s.reduced(group).generator_strings(group).join(","),
            None => "Γ×S¹".into(),
        };
        out.push_str(&format!(
            "  {row} [label=\"({row}) {{{gens}}}\\ndim {}\"];\n",
            r.fix.real_dim,
            row = r.row
        ));
    }
    // Σ_low ⊂ Σ_high up to conjugacy, as matrix groups; keep covering edges.
    let sets: Vec<Option<BTreeSet<TwistedElement>>> =
        records.iter().map(|r| r.sigma.as_ref().map(|s| s.matrix_set(group))).collect();
    let below = |lo: usize, hi: usize| -> bool {
        match (&sets[lo], &sets[hi]) {
            (_, None) => lo != hi,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => {
                a.len() < b.len()
                    && group.elements().iter().any(|g| {
                        let gi = g.inverse();
                        a.iter().all(|t| {
                            let c = TwistedElement::new(g.mul(&t.g).mul(&gi), t.k as i64, t.n).canonical();
                            b.contains(&c)
                        })
                    })
            }
        }
    };
    for lo in 0..records.len() {
        for hi in 0..records.len() {
            if !below(lo, hi) {
                continue;
            }
            let covered = (0..records.len()).any(|m| m != lo && m != hi && below(lo, m) && below(m, hi));
            if !covered {
                out.push_str(&format!("  {} -> {};\n", records[hi].row, records[lo].row));
            }
        }
    }
    out.push_str("}\n");
    out
}
