//! The H mod K conditions, admissible (H, K) pairs, and the catalog of
//! symmetries realized by primary Hopf branches.
//!
//! H is the group of spatio-temporal symmetries of a periodic orbit and
//! K ⊆ H its spatial symmetries. A pair is admissible when
//! (a) K ⊴ H with H/K cyclic, (b) K is an isotropy subgroup of Γ,
//! (c) dim Fix(K) ≥ 2, and H = K or H = N(K) when dim Fix(K) = 2,
//! (d) H preserves a connected component of Fix(K) ∖ L_K.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::exact::CyclotomicField;
use crate::group::{all_subgroups, normalizer, FiniteGroup, GroupKind, Subgroup};
use crate::twisted::{
    enumerate_isotropy, fix_of_elements, fix_of_subgroup, generator_words_in, reinterpret, FixSubspace,
    IsotropyConfig, TwistedElement, TwistedError, TwistedSubgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HmodKError {
    #[error("Fix(γ) ∩ Fix(K) equals Fix(K) for γ ∉ K, so K is not an isotropy subgroup")]
    NotIsotropy,
    #[error(transparent)]
    Twisted(#[from] TwistedError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionFlags {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }
}

#[derive(Clone, Debug)]
pub struct HmodKPair {
    pub h: Subgroup,
    pub k: Subgroup,
    /// |H| / |K| when K ⊆ H, else 0.
    pub quotient_order: usize,
    pub fix_k: FixSubspace,
    pub flags: ConditionFlags,
    pub note: Option<String>,
}

/// One member of L_K and its real codimension in Fix(K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LkComponent {
    pub subspace: FixSubspace,
    pub real_codim: usize,
}

/// Fix(K) for the phase-free action of Γ.
pub fn fix_spatial(field: &CyclotomicField, group: &FiniteGroup, k: &Subgroup) -> FixSubspace {
    fix_of_subgroup(field, group, &TwistedSubgroup::trivial_phases(k, field.order()))
}

/// Elements of Γ fixing every vector of `fix`.
pub fn pointwise_stabilizer(field: &CyclotomicField, group: &FiniteGroup, fix: &FixSubspace) -> Subgroup {
    let members: Vec<usize> = (0..group.order())
        .filter(|&i| {
            let t = TwistedElement::new(*group.element(i), 0, field.order());
            fix.basis.iter().all(|v| &t.act_exact(field, v) == v)
        })
        .collect();
    Subgroup::from_members(group, members).expect("stabilizers are subgroups")
}

/// K is an isotropy subgroup of Γ exactly when it is the pointwise
/// stabilizer of its own fixed-point subspace.
pub fn is_spatial_isotropy(field: &CyclotomicField, group: &FiniteGroup, k: &Subgroup) -> bool {
    let fix = fix_spatial(field, group, k);
    &pointwise_stabilizer(field, group, &fix) == k
}

/// L_K = ⋃_{γ ∉ K} Fix(γ) ∩ Fix(K), with duplicate subspaces merged.
pub fn variety_lk(field: &CyclotomicField, group: &FiniteGroup, k: &Subgroup) -> Result<Vec<LkComponent>, HmodKError> {
    let n = field.order();
    let kgens: Vec<TwistedElement> = k
        .members()
        .iter()
        .map(|&m| TwistedElement::new(*group.element(m), 0, n))
        .collect();
    let fix_k = fix_of_elements(field, &kgens);
    let mut seen: BTreeSet<Vec<Vec<String>>> = BTreeSet::new();
    let mut out = Vec::new();
    for g in 0..group.order() {
        if k.contains(g) {
            continue;
        }
        let mut elems = kgens.clone();
        elems.push(TwistedElement::new(*group.element(g), 0, n));
        let sub = fix_of_elements(field, &elems);
        if sub.complex_dim == fix_k.complex_dim {
            return Err(HmodKError::NotIsotropy);
        }
        let key: Vec<Vec<String>> = sub
            .basis
            .iter()
            .map(|v| v.iter().map(|c| c.to_string()).collect())
            .collect();
        if seen.insert(key) {
            out.push(LkComponent {
                real_codim: fix_k.real_dim - sub.real_dim,
                subspace: sub,
            });
        }
    }
    Ok(out)
}

/// Quotient H/K is cyclic: some h generates H together with K.
fn quotient_cyclic(group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> bool {
    h.members().iter().any(|&x| {
        let mut gens = k.members().to_vec();
        gens.push(x);
        &group.generated(&gens) == h
    })
}

/// Evaluate conditions (a)–(d) for K ⊆ H ⊆ Γ.
pub fn check_conditions(field: &CyclotomicField, group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> HmodKPair {
    let fix_k = fix_spatial(field, group, k);
    let nk = normalizer(group, k);
    let contained = k.is_subset_of(h);
    let a = contained && k.is_normal_in(group, h) && quotient_cyclic(group, h, k);
    let b = is_spatial_isotropy(field, group, k);
    let c = fix_k.real_dim >= 2 && (fix_k.real_dim != 2 || h == k || h == &nk);
    let d = b
        && h.is_subset_of(&nk)
        && variety_lk(field, group, k)
            .map(|lk| lk.iter().all(|c| c.real_codim >= 2 && c.real_codim % 2 == 0))
            .unwrap_or(false);
    let note = if h == k {
        Some("H = K".to_string())
    } else if h == &nk {
        Some("H = N(K)".to_string())
    } else {
        None
    };
    HmodKPair {
        quotient_order: if contained { h.order() / k.order() } else { 0 },
        h: h.clone(),
        k: k.clone(),
        fix_k,
        flags: ConditionFlags { a, b, c, d },
        note,
    }
}

#[derive(Clone, Debug)]
pub struct PairEnumeration {
    pub pairs: Vec<HmodKPair>,
    /// When −Id ∈ Γ the K = 1 pairs are many; only their number is kept.
    pub trivial_k_count: Option<usize>,
}

impl PairEnumeration {
    pub fn nontrivial_k(&self) -> impl Iterator<Item = &HmodKPair> {
        self.pairs.iter().filter(|p| p.k.order() > 1)
    }
}

/// All admissible pairs up to simultaneous conjugacy, ordered by
/// (|K|, |H|, member lists).
pub fn enumerate_pairs(group: &FiniteGroup, n: u32) -> PairEnumeration {
    let field = CyclotomicField::new(n);
    let classes = all_subgroups(group);
    let everything: Vec<Subgroup> = classes.iter().flat_map(|c| c.conjugates.iter().cloned()).collect();
    let summarize_trivial = group.contains_minus_id();
    let mut pairs = Vec::new();
    let mut trivial_count = 0;
    for cls in &classes {
        let k = &cls.representative;
        if !is_spatial_isotropy(&field, group, k) {
            continue;
        }
        let nk = normalizer(group, k);
        let mut kept: Vec<Subgroup> = Vec::new();
        for h in everything.iter().filter(|h| k.is_subset_of(h) && h.is_subset_of(&nk)) {
            if kept
                .iter()
                .any(|o| nk.members().iter().any(|&x| &group.conjugate_subgroup(x, h) == o))
            {
                continue;
            }
            let pair = check_conditions(&field, group, h, k);
            if !pair.flags.all() {
                continue;
            }
            kept.push(h.clone());
            if summarize_trivial && k.order() == 1 {
                trivial_count += 1;
            } else {
                pairs.push(pair);
            }
        }
    }
    pairs.sort_by(|x, y| {
        (x.k.order(), x.h.order(), x.k.members(), x.h.members()).cmp(&(
            y.k.order(),
            y.h.order(),
            y.k.members(),
            y.h.members(),
        ))
    });
    PairEnumeration {
        pairs,
        trivial_k_count: summarize_trivial.then_some(trivial_count),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    #[serde(rename = "C-axial")]
    CAxial,
    /// Exists only for suitable cubic coefficients.
    #[serde(rename = "submaximal-conditional")]
    SubmaximalConditional,
}

/// How (H, K) is read off Σ when (−Id, ½) ∈ Σ acts trivially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// H is the full projection of Σ, K its phase-0 part.
    Full,
    /// The (−Id, ½) half is dropped first (see [`TwistedSubgroup::reduced`]).
    Reduced,
}

/// Σ, H and K written in one of the three alphabets.
#[derive(Clone, Debug, Serialize)]
pub struct Interpretation {
    pub group: GroupKind,
    pub sigma: Vec<String>,
    pub h: Vec<String>,
    pub k: Vec<String>,
    pub h_order: usize,
    pub k_order: usize,
    pub branch_count: usize,
}

#[derive(Clone, Debug)]
pub struct HopfBranchRecord {
    pub row: char,
    pub sigma: TwistedSubgroup,
    pub h: Subgroup,
    pub k: Subgroup,
    pub h_reduced: Subgroup,
    pub k_reduced: Subgroup,
    pub branch_count: usize,
    pub kind: BranchKind,
    pub fix: FixSubspace,
    pub interpretations: Vec<Interpretation>,
}

impl HopfBranchRecord {
    pub fn pair(&self, reading: Reading) -> (&Subgroup, &Subgroup) {
        match reading {
            Reading::Full => (&self.h, &self.k),
            Reading::Reduced => (&self.h_reduced, &self.k_reduced),
        }
    }
}

fn subgroup_words(group: &FiniteGroup, s: &Subgroup) -> Vec<String> {
    let g = group.generators_of(s);
    if g.is_empty() {
        return vec!["Id".into()];
    }
    g.iter().map(|&i| group.word_string(i)).collect()
}

/// Σ read in the alphabet of `kind`, with the (−Id, ½) reduction applied.
pub fn interpret(group: &FiniteGroup, sigma: &TwistedSubgroup, kind: GroupKind) -> Interpretation {
    let target = kind.build();
    let lifted = reinterpret(&sigma.matrix_set(group), &target).expect("extended groups coincide");
    let red = lifted.reduced(&target);
    Interpretation {
        group: kind,
        sigma: generator_words_in(group, sigma, kind),
        h: subgroup_words(&target, &red.subgroup),
        k: subgroup_words(&target, &red.kernel()),
        h_order: red.order(),
        k_order: red.kernel().order(),
        branch_count: target.order() / lifted.order(),
    }
}

/// Branch symmetries of primary Hopf bifurcation: the C-axial rows plus the
/// two four-dimensional rows whose branches need suitable coefficients.
pub fn hopf_catalog(group: &FiniteGroup, config: &IsotropyConfig) -> Result<Vec<HopfBranchRecord>, HmodKError> {
    let iso = enumerate_isotropy(group, config)?;
    let mut out = Vec::new();
    for rec in iso.records {
        let Some(sigma) = rec.sigma else { continue };
        let kind = match rec.fix.real_dim {
            2 => BranchKind::CAxial,
            4 => BranchKind::SubmaximalConditional,
            _ => continue,
        };
        let red = sigma.reduced(group);
        out.push(HopfBranchRecord {
            row: rec.row,
            h: sigma.subgroup.clone(),
            k: sigma.kernel(),
            h_reduced: red.subgroup.clone(),
            k_reduced: red.kernel(),
            branch_count: group.order() / sigma.order(),
            kind,
            fix: rec.fix,
            interpretations: GroupKind::ALL.iter().map(|&k| interpret(group, &sigma, k)).collect(),
            sigma,
        });
    }
    Ok(out)
}

/// Simultaneous conjugacy of (H, K) pairs.
pub fn pairs_conjugate(group: &FiniteGroup, a: (&Subgroup, &Subgroup), b: (&Subgroup, &Subgroup)) -> bool {
    a.0.order() == b.0.order()
        && a.1.order() == b.1.order()
        && (0..group.order()).any(|g| {
            &group.conjugate_subgroup(g, a.0) == b.0 && &group.conjugate_subgroup(g, a.1) == b.1
        })
}

/// Admissible pairs with H ≠ 1 that no catalog record realizes. For groups
/// containing −Id only pairs with K ≠ 1 are considered.
pub fn classify_unrealizable(
    group: &FiniteGroup,
    pairs: &PairEnumeration,
    catalog: &[HopfBranchRecord],
    reading: Reading,
) -> Vec<HmodKPair> {
    pairs
        .pairs
        .iter()
        .filter(|p| p.h.order() > 1)
        .filter(|p| !group.contains_minus_id() || p.k.order() > 1)
        .filter(|p| {
            !catalog
                .iter()
                .any(|r| pairs_conjugate(group, (&p.h, &p.k), r.pair(reading)))
        })
        .cloned()
        .collect()
}

#[derive(Serialize)]
pub struct PairRow {
    pub k_name: String,
    pub k_generators: Vec<String>,
    pub h_name: String,
    pub h_generators: Vec<String>,
    pub fix_k: String,
    pub dim: usize,
    pub quotient_order: usize,
    pub flags: ConditionFlags,
    pub note: Option<String>,
}

pub fn pair_row(group: &FiniteGroup, p: &HmodKPair) -> PairRow {
    PairRow {
        k_name: p.k.structure_name(group),
        k_generators: subgroup_words(group, &p.k),
        h_name: p.h.structure_name(group),
        h_generators: subgroup_words(group, &p.h),
        fix_k: p.fix_k.pattern(),
        dim: p.fix_k.real_dim,
        quotient_order: p.quotient_order,
        flags: p.flags,
        note: p.note.clone(),
    }
}

#[derive(Serialize)]
pub struct CatalogRow {
    pub row: char,
    pub kind: BranchKind,
    pub fix: String,
    pub sigma: Vec<String>,
    pub h: Vec<String>,
    pub k: Vec<String>,
    pub h_full_order: usize,
    pub k_full_order: usize,
    pub branch_count: usize,
    pub interpretations: Vec<Interpretation>,
}

pub fn catalog_row(group: &FiniteGroup, r: &HopfBranchRecord) -> CatalogRow {
    let own = r
        .interpretations
        .iter()
        .find(|i| i.h_order == r.h_reduced.order() && i.branch_count == r.branch_count && kind_matches(group, i.group));
    let (sigma, h, k) = match own {
        Some(i) => (i.sigma.clone(), i.h.clone(), i.k.clone()),
        None => (
            r.sigma.reduced(group).generator_strings(group),
            subgroup_words(group, &r.h_reduced),
            subgroup_words(group, &r.k_reduced),
        ),
    };
    CatalogRow {
        row: r.row,
        kind: r.kind,
        fix: r.fix.pattern(),
        sigma,
        h,
        k,
        h_full_order: r.h.order(),
        k_full_order: r.k.order(),
        branch_count: r.branch_count,
        interpretations: r.interpretations.clone(),
    }
}

fn kind_matches(group: &FiniteGroup, kind: GroupKind) -> bool {
    let alpha = kind.alphabet();
    group.generators().len() == alpha.len()
        && group.generators().iter().zip(&alpha).all(|(a, b)| a.1 == b.1)
}

fn braces(v: &[String]) -> String {
    format!("{{{}}}", v.join(","))
}

/// Aligned text table of admissible pairs.
pub fn pairs_table_text(group: &FiniteGroup, pe: &PairEnumeration) -> String {
    let rows: Vec<PairRow> = pe.pairs.iter().map(|p| pair_row(group, p)).collect();
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.k_name.clone(),
                braces(&r.k_generators),
                r.h_name.clone() + r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default().as_str(),
                braces(&r.h_generators),
                r.fix_k.clone(),
                r.dim.to_string(),
            ]
        })
        .collect();
    let mut out = align(&["K", "gens K", "H", "gens H", "Fix(K)", "dim"], &cells);
    if let Some(c) = pe.trivial_k_count {
        let _ = writeln!(out, "K = 1: {c} cyclic H up to conjugacy (not listed)");
    }
    let _ = writeln!(
        out,
        "pairs: {} ({} with K != 1)",
        pe.pairs.len() + pe.trivial_k_count.unwrap_or(0),
        pe.nontrivial_k().count()
    );
    out
}

/// Aligned text table of the primary-Hopf catalog.
pub fn catalog_table_text(group: &FiniteGroup, cat: &[HopfBranchRecord]) -> String {
    let cells: Vec<[String; 6]> = cat
        .iter()
        .map(|r| {
            let row = catalog_row(group, r);
            [
                format!("({})", row.row),
                braces(&row.sigma),
                braces(&row.h),
                braces(&row.k),
                row.branch_count.to_string(),
                match row.kind {
                    BranchKind::CAxial => "C-axial".into(),
                    BranchKind::SubmaximalConditional => "submaximal".into(),
                },
            ]
        })
        .collect();
    align(&["row", "Σ", "H", "K", "branches", "kind"], &cells)
}

fn align<const W: usize>(header: &[&str; W], rows: &[[String; W]]) -> String {
    let mut width = [0usize; W];
    for (i, h) in header.iter().enumerate() {
        width[i] = h.chars().count();
    }
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c}{}", " ".repeat(width[i] - c.chars().count())))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out.push_str(&line(width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
