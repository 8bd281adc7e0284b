//! Finite groups of 3×3 signed-permutation matrices.
//!
//! Elements are found by breadth-first closure from an ordered generator list,
//! so element order and recorded words are deterministic. Subgroups are plain
//! sorted index sets into the parent group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix {0:?} is not a signed permutation")]
    NotSignedPermutation([[i8; 3]; 3]),
    #[error("closure exceeded {0} elements")]
    ClosureBound(usize),
    #[error("element {element} is not representable over the alphabet {{{alphabet}}}")]
    NotRepresentable { element: String, alphabet: String },
    #[error("unknown group selector `{0}` (expected tetra-full, octa-rot or octa-full)")]
    UnknownGroup(String),
}

/// A signed permutation matrix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement([[i8; 3]; 3]);

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl GroupElement {
    pub fn new(m: [[i8; 3]; 3]) -> Result<Self, GroupError> {
        let ok_entries = m.iter().flatten().all(|&v| (-1..=1).contains(&v));
        let rows_ok = m.iter().all(|r| r.iter().filter(|&&v| v != 0).count() == 1);
        let cols_ok = (0..3).all(|j| (0..3).filter(|&i| m[i][j] != 0).count() == 1);
        if ok_entries && rows_ok && cols_ok {
            Ok(GroupElement(m))
        } else {
            Err(GroupError::NotSignedPermutation(m))
        }
    }

    pub const fn identity() -> Self {
        GroupElement([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// diag(1, −1, −1)
    pub const fn r() -> Self {
        GroupElement([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    }

    /// (z1, z2, z3) ↦ (z2, z3, z1)
    pub const fn c() -> Self {
        GroupElement([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    }

    /// (z1, z2, z3) ↦ (z1, z3, z2)
    pub const fn kappa() -> Self {
        GroupElement([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    }

    /// (z1, z2, z3) ↦ (z2, −z1, z3)
    pub const fn t() -> Self {
        GroupElement([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])
    }

    pub const fn minus_id() -> Self {
        GroupElement([[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
    }

    pub fn matrix(&self) -> [[i8; 3]; 3] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Column index and sign of the nonzero entry in row `i`.
    pub fn row_entry(&self, i: usize) -> (usize, i8) {
        let j = (0..3).find(|&j| self.0[i][j] != 0).unwrap();
        (j, self.0[i][j])
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        let mut out = [[0i8; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        GroupElement(out)
    }

    pub fn inverse(&self) -> GroupElement {
        let mut out = [[0i8; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[j][i] = v;
            }
        }
        GroupElement(out)
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement(self.0.map(|r| r.map(|v| -v)))
    }

    pub fn det(&self) -> i8 {
        let m = &self.0;
        let d = m[0][0] as i32 * (m[1][1] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][1] as i32)
            - m[0][1] as i32 * (m[1][0] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][0] as i32)
            + m[0][2] as i32 * (m[1][0] as i32 * m[2][1] as i32 - m[1][1] as i32 * m[2][0] as i32);
        d as i8
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| self.row_entry(i).0 == i)
    }

    /// Compact one-line form such as `(z2,-z1,z3)`: the image of a generic vector.
    pub fn action_string(&self) -> String {
        let parts: Vec<String> = (0..3)
            .map(|i| {
                let (j, s) = self.row_entry(i);
                format!("{}z{}", if s < 0 { "-" } else { "" }, j + 1)
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

/// Label used for −Id in alphabets and words; words put it in front as a sign.
pub const MINUS_ID_LABEL: &str = "-Id";

/// Generator list with display labels.
pub type Alphabet = Vec<(String, GroupElement)>;

pub fn alphabet_tetra() -> Alphabet {
    vec![
        ("C".into(), GroupElement::c()),
        ("R".into(), GroupElement::r()),
        ("κ".into(), GroupElement::kappa()),
    ]
}

pub fn alphabet_octa() -> Alphabet {
    vec![("C".into(), GroupElement::c()), ("T".into(), GroupElement::t())]
}

pub fn alphabet_octa_full() -> Alphabet {
    vec![
        ("C".into(), GroupElement::c()),
        ("T".into(), GroupElement::t()),
        (MINUS_ID_LABEL.into(), GroupElement::minus_id()),
    ]
}

/// The three symmetry groups studied here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// ⟨𝕋, κ⟩ generated by C, R, κ; order 24.
    TetraFull,
    /// 𝕆 generated by C, T; order 24.
    OctaRot,
    /// ⟨𝕆, −Id⟩ generated by C, T, −Id; order 48.
    OctaFull,
}

impl GroupKind {
    pub const ALL: [GroupKind; 3] = [GroupKind::TetraFull, GroupKind::OctaRot, GroupKind::OctaFull];

    pub fn selector(&self) -> &'static str {
        match self {
            GroupKind::TetraFull => "tetra-full",
            GroupKind::OctaRot => "octa-rot",
            GroupKind::OctaFull => "octa-full",
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            GroupKind::TetraFull => "⟨T,κ⟩",
            GroupKind::OctaRot => "O",
            GroupKind::OctaFull => "⟨O,-Id⟩",
        }
    }

    pub fn from_selector(s: &str) -> Result<Self, GroupError> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.selector() == s)
            .ok_or_else(|| GroupError::UnknownGroup(s.to_string()))
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            GroupKind::TetraFull => alphabet_tetra(),
            GroupKind::OctaRot => alphabet_octa(),
            GroupKind::OctaFull => alphabet_octa_full(),
        }
    }

    pub fn build(&self) -> FiniteGroup {
        generate_group(&self.alphabet(), DEFAULT_CLOSURE_BOUND).expect("standard generators are finite")
    }
}

/// A finite group closed from labelled generators.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
    generators: Alphabet,
    words: Vec<Vec<usize>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

/// Breadth-first closure. Element 0 is the identity; new elements are
/// discovered as `x·s` with generators `s` tried in the given order.
pub fn generate_group(generators: &[(String, GroupElement)], bound: usize) -> Result<FiniteGroup, GroupError> {
    let mut elements = vec![GroupElement::identity()];
    let mut index = BTreeMap::from([(GroupElement::identity(), 0usize)]);
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (gi, (_, s)) in generators.iter().enumerate() {
            let y = elements[x].mul(s);
            if index.contains_key(&y) {
                continue;
            }
            if elements.len() >= bound {
                return Err(GroupError::ClosureBound(bound));
            }
            index.insert(y, elements.len());
            let mut w = words[x].clone();
            w.push(gi);
            words.push(w);
            elements.push(y);
            queue.push_back(elements.len() - 1);
        }
    }
    let n = elements.len();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| index[&elements[i].mul(&elements[j])]).collect())
        .collect();
    let inverses = (0..n).map(|i| index[&elements[i].inverse()]).collect();
    Ok(FiniteGroup {
        elements,
        index,
        generators: generators.to_vec(),
        words,
        table,
        inverses,
    })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn generators(&self) -> &Alphabet {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// g a g⁻¹
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.table[self.table[g][a]][self.inverses[g]]
    }

    /// Shortest word (generator indices) recorded during closure.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn evaluate_word(&self, word: &[usize]) -> GroupElement {
        word.iter()
            .fold(GroupElement::identity(), |acc, &l| acc.mul(&self.generators[l].1))
    }

    pub fn word_string(&self, i: usize) -> String {
        format_word(&self.generators, &self.words[i])
    }

    pub fn contains_minus_id(&self) -> bool {
        self.index.contains_key(&GroupElement::minus_id())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Subgroup generated by the given element indices.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.table[x][g];
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            members: set.into_iter().collect(),
        }
    }

    /// Subgroup generated by matrices; `None` if some matrix is not in the group.
    pub fn generated_by_elements(&self, gens: &[GroupElement]) -> Option<Subgroup> {
        let idx: Option<Vec<usize>> = gens.iter().map(|g| self.index_of(g)).collect();
        idx.map(|v| self.generated(&v))
    }

    pub fn conjugate_subgroup(&self, g: usize, s: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = s.members.iter().map(|&a| self.conj(g, a)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.order() == b.order() && (0..self.order()).any(|g| &self.conjugate_subgroup(g, a) == b)
    }

    /// A short generating set: fewest generators first, then shortest words.
    pub fn generators_of(&self, s: &Subgroup) -> Vec<usize> {
        if s.order() == 1 {
            return Vec::new();
        }
        let mut cand: Vec<usize> = s.members.iter().copied().filter(|&i| i != 0).collect();
        cand.sort_by_key(|&i| (self.words[i].len(), self.words[i].clone()));
        for &a in &cand {
            if &self.generated(&[a]) == s {
                return vec![a];
            }
        }
        for (x, &a) in cand.iter().enumerate() {
            for &b in &cand[x + 1..] {
                if &self.generated(&[a, b]) == s {
                    return vec![a, b];
                }
            }
        }
        for (x, &a) in cand.iter().enumerate() {
            for (y, &b) in cand.iter().enumerate().skip(x + 1) {
                for &c in &cand[y + 1..] {
                    if &self.generated(&[a, b, c]) == s {
                        return vec![a, b, c];
                    }
                }
            }
        }
        cand
    }
}

/// Render a word such as `TC^2TC^2`. A −Id letter is central, so it is
/// pulled to the front and shown as a sign; the empty word is `Id`.
pub fn format_word(alphabet: &[(String, GroupElement)], word: &[usize]) -> String {
    let mut negate = false;
    let mut letters: Vec<&str> = Vec::new();
    for &l in word {
        let label = alphabet[l].0.as_str();
        if alphabet[l].1 == GroupElement::minus_id() {
            negate = !negate;
        } else {
            letters.push(label);
        }
    }
    let mut body = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        body.push_str(letters[i]);
        if j - i > 1 {
            body.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    match (negate, body.is_empty()) {
        (false, true) => "Id".into(),
        (true, true) => "-Id".into(),
        (false, false) => body,
        (true, false) => format!("-{body}"),
    }
}

pub fn element_order(g: &GroupElement) -> usize {
    let mut x = *g;
    let mut n = 1;
    while !x.is_identity() {
        x = x.mul(g);
        n += 1;
    }
    n
}

/// Conjugacy classes as element-index lists, ordered by first element.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut classes = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        let class: BTreeSet<usize> = (0..g.order()).map(|x| g.conj(x, a)).collect();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class.into_iter().collect());
    }
    classes
}

/// Shortest word for `g` over `alphabet`.
pub fn rewrite_word(g: &GroupElement, alphabet: &[(String, GroupElement)]) -> Result<Vec<usize>, GroupError> {
    let closure = generate_group(alphabet, DEFAULT_CLOSURE_BOUND)?;
    closure
        .index_of(g)
        .map(|i| closure.word(i).to_vec())
        .ok_or_else(|| GroupError::NotRepresentable {
            element: g.action_string(),
            alphabet: alphabet.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(","),
        })
}

/// Subgroup of a parent [`FiniteGroup`], as sorted member indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Build from member indices; returns `None` unless closed in `g`.
    pub fn from_members(g: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Option<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if !set.contains(&0) {
            return None;
        }
        let closed = set.iter().all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b))));
        closed.then(|| Subgroup {
            members: set.into_iter().collect(),
        })
    }

    /// Members known to be closed (images or kernels of subgroups).
    pub(crate) fn from_members_unchecked(mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_normal_in(&self, g: &FiniteGroup, h: &Subgroup) -> bool {
        self.is_subset_of(h) && h.members.iter().all(|&x| &g.conjugate_subgroup(x, self) == self)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.iter().copied().filter(|&m| other.contains(m)).collect(),
        }
    }

    pub fn is_cyclic(&self, g: &FiniteGroup) -> bool {
        self.members
            .iter()
            .any(|&m| element_order(g.element(m)) == self.order())
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    /// Isomorphism-type label: `1`, `Zn`, `Dn`, otherwise `order-n`.
    pub fn structure_name(&self, g: &FiniteGroup) -> String {
        let n = self.order();
        if n == 1 {
            return "1".into();
        }
        if self.is_cyclic(g) {
            return format!("Z{n}");
        }
        if n % 2 == 0 {
            let m = n / 2;
            // dihedral: a cyclic subgroup of index 2 and an involution inverting it
            for &r in &self.members {
                if element_order(g.element(r)) != m {
                    continue;
                }
                let dihedral = self.members.iter().any(|&s| {
                    let rot = g.generated(&[r]);
                    !rot.contains(s)
                        && element_order(g.element(s)) == 2
                        && g.conj(s, r) == g.inv(r)
                });
                if dihedral {
                    return format!("D{m}");
                }
            }
        }
        format!("order-{n}")
    }
}

pub fn normalizer(g: &FiniteGroup, s: &Subgroup) -> Subgroup {
    Subgroup {
        members: (0..g.order())
            .filter(|&x| &g.conjugate_subgroup(x, s) == s)
            .collect(),
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
}

/// Every subgroup, grouped into conjugacy classes ordered by (order, members).
pub fn all_subgroups(g: &FiniteGroup) -> Vec<SubgroupClass> {
    let mut found: BTreeSet<Subgroup> = (0..g.order()).map(|a| g.generated(&[a])).collect();
    let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for a in 0..g.order() {
                if s.contains(a) {
                    continue;
                }
                let mut gens = s.members.clone();
                gens.push(a);
                let t = g.generated(&gens);
                if found.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<Subgroup> = found.into_iter().collect();
    all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
    for s in all {
        if assigned.contains(&s) {
            continue;
        }
        let conj: BTreeSet<Subgroup> = (0..g.order()).map(|x| g.conjugate_subgroup(x, &s)).collect();
        assigned.extend(conj.iter().cloned());
        classes.push(SubgroupClass {
            representative: s,
            conjugates: conj.into_iter().collect(),
        });
    }
    classes
}

/// Graphviz lattice of subgroup classes; an edge joins a class to each class
/// that contains one of its members as a maximal proper subgroup.
pub fn lattice_dot(g: &FiniteGroup, classes: &[SubgroupClass], title: &str) -> String {
    let mut out = format!("digraph \"{title}\" {{\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, c) in classes.iter().enumerate() {
        let gens: Vec<String> = g
            .generators_of(&c.representative)
            .iter()
            .map(|&e| g.word_string(e))
            .collect();
        out.push_str(&format!(
            "  s{i} [label=\"{} {{{}}}\\n|S|={} x{}\"];\n",
            c.representative.structure_name(g),
            gens.join(","),
            c.representative.order(),
            c.conjugates.len()
        ));
    }
    for (i, low) in classes.iter().enumerate() {
        for (j, high) in classes.iter().enumerate() {
            if high.representative.order() <= low.representative.order() {
                continue;
            }
            let covered = high.conjugates.iter().any(|h| {
                low.representative.is_subset_of(h)
                    && !classes.iter().any(|mid| {
                        mid.representative.order() > low.representative.order()
                            && mid.representative.order() < h.order()
                            && mid
                                .conjugates
                                .iter()
                                .any(|m| low.representative.is_subset_of(m) && m.is_subset_of(h))
                    })
            });
            if covered {
                out.push_str(&format!("  s{i} -> s{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(GroupKind::TetraFull.build().order(), 24);
        assert_eq!(GroupKind::OctaRot.build().order(), 24);
        assert_eq!(GroupKind::OctaFull.build().order(), 48);
        let id = generate_group(&[("Id".into(), GroupElement::identity())], 10).unwrap();
        assert_eq!(id.order(), 1);
    }

    #[test]
    fn closure_bound_is_enforced() {
        let err = generate_group(&alphabet_octa_full(), 10).unwrap_err();
        assert_eq!(err, GroupError::ClosureBound(10));
    }

    #[test]
    fn rejects_non_signed_permutations() {
        assert!(GroupElement::new([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).is_err());
        assert!(GroupElement::new([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_err());
        assert!(GroupElement::new([[0, -1, 0], [1, 0, 0], [0, 0, 1]]).is_ok());
    }

    #[test]
    fn generator_orders() {
        assert_eq!(element_order(&GroupElement::r()), 2);
        assert_eq!(element_order(&GroupElement::c()), 3);
        assert_eq!(element_order(&GroupElement::kappa()), 2);
        assert_eq!(element_order(&GroupElement::t()), 4);
    }

    #[test]
    fn words_evaluate_to_elements() {
        for kind in GroupKind::ALL {
            let g = kind.build();
            for i in 0..g.order() {
                assert_eq!(&g.evaluate_word(g.word(i)), g.element(i));
            }
        }
    }

    #[test]
    fn determinants() {
        let o = GroupKind::OctaRot.build();
        assert!(o.elements().iter().all(|e| e.det() == 1));
        let t = GroupKind::TetraFull.build();
        assert!(t.elements().iter().any(|e| e.det() == -1));
        let a: BTreeSet<_> = t.elements().iter().collect();
        let b: BTreeSet<_> = o.elements().iter().collect();
        assert_ne!(a, b);
    }

    fn brute_force_class_count(g: &FiniteGroup) -> usize {
        let mut reps: Vec<BTreeSet<GroupElement>> = Vec::new();
        for a in g.elements() {
            let class: BTreeSet<GroupElement> =
                g.elements().iter().map(|x| x.mul(a).mul(&x.inverse())).collect();
            if !reps.contains(&class) {
                reps.push(class);
            }
        }
        reps.len()
    }

    #[test]
    fn class_counts() {
        let t = GroupKind::TetraFull.build();
        let cls = conjugacy_classes(&t);
        let mut sizes: Vec<usize> = cls.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        assert_eq!(cls.len(), brute_force_class_count(&t));
        let o = GroupKind::OctaRot.build();
        assert_eq!(conjugacy_classes(&o).len(), 5);
        assert_eq!(brute_force_class_count(&o), 5);
        let triv = generate_group(&[], 5).unwrap();
        assert_eq!(conjugacy_classes(&triv).len(), 1);
    }

    #[test]
    fn subgroup_classes() {
        let triv = generate_group(&[], 5).unwrap();
        let cls = all_subgroups(&triv);
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].representative.order(), 1);

        let t = GroupKind::TetraFull.build();
        let cls = all_subgroups(&t);
        // S4 has 11 subgroup classes and 30 subgroups
        assert_eq!(cls.len(), 11);
        assert_eq!(cls.iter().map(|c| c.conjugates.len()).sum::<usize>(), 30);
        let sylow: Vec<_> = cls.iter().filter(|c| c.representative.order() == 8).collect();
        assert_eq!(sylow.len(), 1);
        assert_eq!(sylow[0].conjugates.len(), 3);
    }

    #[test]
    fn long_word_subgroup_exists() {
        let g = GroupKind::OctaFull.build();
        let (c, t) = (GroupElement::c(), GroupElement::t());
        let e = t.mul(&t).mul(&c).mul(&c).mul(&t).mul(&c).neg();
        let s = g.generated_by_elements(&[e]).unwrap();
        assert_eq!(s.order(), 2);
        let all = all_subgroups(&g);
        assert!(all.iter().any(|cl| cl.conjugates.contains(&s)));
    }

    #[test]
    fn normalizer_orders() {
        let g = GroupKind::OctaFull.build();
        let (c, t) = (GroupElement::c(), GroupElement::t());
        let h = t.mul(&t).mul(&c).mul(&c).mul(&t).mul(&c).neg();
        let k = t.mul(&c).mul(&c).mul(&t).mul(&c).mul(&c).neg();
        let sh = g.generated_by_elements(&[h]).unwrap();
        let sk = g.generated_by_elements(&[k]).unwrap();
        assert_eq!(normalizer(&g, &sh).order(), 8);
        assert_eq!(normalizer(&g, &sk).order(), 16);
        assert_eq!(normalizer(&g, &g.whole()), g.whole());
        for cl in all_subgroups(&g) {
            let s = &cl.representative;
            let n = normalizer(&g, s);
            assert!(s.is_subset_of(&n));
            assert!(Subgroup::from_members(&g, n.members().iter().copied()).is_some());
        }
    }

    #[test]
    fn rewriting() {
        let r = rewrite_word(&GroupElement::r(), &alphabet_octa()).unwrap();
        let o = generate_group(&alphabet_octa(), 100).unwrap();
        assert_eq!(o.evaluate_word(&r), GroupElement::r());
        assert!(rewrite_word(&GroupElement::identity(), &alphabet_tetra()).unwrap().is_empty());
        let t2 = GroupElement::t().mul(&GroupElement::t()).neg();
        let w = rewrite_word(&t2, &alphabet_octa_full()).unwrap();
        let f = GroupKind::OctaFull.build();
        assert_eq!(f.evaluate_word(&w), t2);
        assert_eq!(format_word(&alphabet_octa_full(), &w), "-T^2");
        assert!(matches!(
            rewrite_word(&GroupElement::minus_id(), &alphabet_octa()),
            Err(GroupError::NotRepresentable { .. })
        ));
    }

    #[test]
    fn rewrite_roundtrip_all_alphabets() {
        let full = GroupKind::OctaFull.build();
        for kind in GroupKind::ALL {
            let g = kind.build();
            for e in g.elements() {
                let w = rewrite_word(e, &kind.alphabet()).unwrap();
                assert_eq!(&g.evaluate_word(&w), e);
            }
        }
        // R and κ(−Id) are not in 𝕆, but lie in ⟨𝕆,−Id⟩
        assert!(full.index_of(&GroupElement::kappa()).is_some());
    }

    #[test]
    fn word_formatting() {
        let a = alphabet_octa();
        assert_eq!(format_word(&a, &[1, 0, 0, 1, 0, 0]), "TC^2TC^2");
        assert_eq!(format_word(&a, &[]), "Id");
        let f = alphabet_octa_full();
        assert_eq!(format_word(&f, &[2]), "-Id");
        assert_eq!(format_word(&f, &[1, 2, 0]), "-TC");
    }

    #[test]
    fn structure_names() {
        let g = GroupKind::TetraFull.build();
        let names: BTreeSet<String> = all_subgroups(&g)
            .iter()
            .map(|c| c.representative.structure_name(&g))
            .collect();
        for n in ["1", "Z2", "Z3", "Z4", "D2", "D3", "D4"] {
            assert!(names.contains(n), "{n} missing from {names:?}");
        }
    }

    #[test]
    fn dot_output_has_every_class() {
        let g = GroupKind::TetraFull.build();
        let cls = all_subgroups(&g);
        let dot = lattice_dot(&g, &cls, "tetra");
        assert!(dot.starts_with("digraph"));
        for i in 0..cls.len() {
            assert!(dot.contains(&format!("s{i} [")));
        }
    }
}
