//! Orbits of transfer-type multiplets under the symmetric group.
//!
//! `S_{p+1}` acts on `kappa: {1..p+1} -> {0..p+1}` by
//! `kappa^pi = pi_0^{-1} . kappa . pi`, where `pi_0` extends `pi` by `0 -> 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::transfer::Multiplet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeclassError {
    #[error("permutation of degree {perm} applied to a multiplet of degree {kappa}")]
    DegreeMismatch { perm: usize, kappa: usize },
    #[error("orbit labels exist only for p = 2 and p = 3, got p = {0}")]
    UnsupportedPrimeForLabels(u32),
    #[error("multiplet {0} has the wrong degree or values for p = {1}")]
    InvalidMultiplet(String, u32),
}

/// A permutation of `{1..n}`, stored as its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Panics unless `images` is a permutation of `1..=n`.
    pub fn new(images: Vec<u32>) -> Self {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().copied().eq(1..=images.len() as u32), "not a permutation: {images:?}");
        Permutation(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        if i == 0 {
            0
        } else {
            self.0[i as usize - 1]
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    /// `(self . other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n as u32).permutations(n).map(Permutation)
    }
}

fn act_raw(kappa: &[u32], pi: &Permutation, pi_inv: &Permutation) -> Vec<u32> {
    (1..=kappa.len() as u32)
        .map(|i| pi_inv.apply(kappa[pi.apply(i) as usize - 1]))
        .collect()
}

/// `kappa^pi (i) = pi_0^{-1}(kappa(pi(i)))`; `act(act(k, pi), sigma) = act(k, pi . sigma)`.
pub fn act(kappa: &Multiplet, pi: &Permutation) -> Result<Multiplet, TypeclassError> {
    if kappa.degree() != pi.degree() {
        return Err(TypeclassError::DegreeMismatch {
            perm: pi.degree(),
            kappa: kappa.degree(),
        });
    }
    Ok(Multiplet::new(act_raw(kappa.kappa(), pi, &pi.inverse())))
}

/// The orbit as a sorted set.
pub fn orbit(kappa: &Multiplet) -> BTreeSet<Vec<u32>> {
    Permutation::all(kappa.degree())
        .map(|pi| {
            let inv = pi.inverse();
            act_raw(kappa.kappa(), &pi, &inv)
        })
        .collect()
}

/// The lexicographically smallest member of the orbit.
pub fn canonical_representative(kappa: &Multiplet) -> Multiplet {
    Multiplet::new(orbit(kappa).into_iter().next().expect("orbits are non-empty"))
}

/// Occupation numbers, fixed points, image, zeros and the preimage of the
/// values taken exactly twice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Statistics {
    pub occupation: Vec<u32>,
    pub fixed: BTreeSet<u32>,
    pub image: BTreeSet<u32>,
    pub zeros: BTreeSet<u32>,
    pub doubles: BTreeSet<u32>,
}

pub fn statistics(kappa: &Multiplet) -> Statistics {
    let k = kappa.kappa();
    let n = k.len();
    let mut occupation = vec![0u32; n + 1];
    for &v in k {
        occupation[v as usize] += 1;
    }
    let positions = |pred: &dyn Fn(u32, u32) -> bool| -> BTreeSet<u32> {
        (1..=n as u32).filter(|&i| pred(i, k[i as usize - 1])).collect()
    };
    Statistics {
        fixed: positions(&|i, v| i == v),
        image: k.iter().copied().collect(),
        zeros: positions(&|_, v| v == 0),
        doubles: positions(&|_, v| occupation[v as usize] == 2),
        occupation,
    }
}

/// The phrases of the characterising-property column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    Constant,
    AlmostConstant,
    Identity,
    Transposition,
    ThreeCycle,
    FourCycle,
    TwoDisjointTranspositions,
    IdentityWithZero,
    FourCycleWithZero,
    TwoDisjointTranspositionsWithZero,
    DMinusFSubsetI,
    DMinusFNotSubsetI,
    DCapFEmpty,
    DSubsetI,
    DNotSubsetI,
    ZSubsetI,
    ZNotSubsetI,
    DCapIOne,
    DCapIEmpty,
}

impl Property {
    pub fn phrase(self) -> &'static str {
        use Property::*;
        match self {
            Constant => "constant",
            AlmostConstant => "almost constant",
            Identity => "identity",
            Transposition => "transposition",
            ThreeCycle => "3-cycle",
            FourCycle => "4-cycle",
            TwoDisjointTranspositions => "2 disj. transp.",
            IdentityWithZero => "identity with 0",
            FourCycleWithZero => "4-cycle with 0",
            TwoDisjointTranspositionsWithZero => "2 disj. transp. with 0",
            DMinusFSubsetI => "D\\F⊂I",
            DMinusFNotSubsetI => "D\\F⊄I",
            DCapFEmpty => "D∩F=∅",
            DSubsetI => "D⊂I",
            DNotSubsetI => "D⊄I",
            ZSubsetI => "Z⊂I",
            ZNotSubsetI => "Z⊄I",
            DCapIOne => "|D∩I|=1",
            DCapIEmpty => "D∩I=∅",
        }
    }

    /// Evaluates the phrase on a multiplet.
    pub fn holds(self, kappa: &Multiplet) -> bool {
        use Property::*;
        let k = kappa.kappa();
        let n = k.len();
        let s = statistics(kappa);
        let subset = |a: &BTreeSet<u32>, b: &BTreeSet<u32>| a.is_subset(b);
        match self {
            Constant => k.iter().all_equal(),
            AlmostConstant => s.occupation.iter().any(|&o| o as usize == n - 1),
            Identity | Transposition | ThreeCycle | FourCycle | TwoDisjointTranspositions => {
                cycle_type(k).as_deref() == Some(self.cycle_lengths())
            }
            IdentityWithZero | FourCycleWithZero | TwoDisjointTranspositionsWithZero => {
                let base = match self {
                    IdentityWithZero => Identity,
                    FourCycleWithZero => FourCycle,
                    _ => TwoDisjointTranspositions,
                };
                s.occupation[0] == 1 && {
                    let missing = (1..=n as u32).find(|v| s.occupation[*v as usize] == 0);
                    match missing {
                        Some(v) => {
                            let filled: Vec<u32> = k.iter().map(|&x| if x == 0 { v } else { x }).collect();
                            cycle_type(&filled).as_deref() == Some(base.cycle_lengths())
                        }
                        None => false,
                    }
                }
            }
            DMinusFSubsetI => subset(&(&s.doubles - &s.fixed), &s.image),
            DMinusFNotSubsetI => !subset(&(&s.doubles - &s.fixed), &s.image),
            DCapFEmpty => s.doubles.is_disjoint(&s.fixed),
            DSubsetI => subset(&s.doubles, &s.image),
            DNotSubsetI => !subset(&s.doubles, &s.image),
            ZSubsetI => subset(&s.zeros, &s.image),
            ZNotSubsetI => !subset(&s.zeros, &s.image),
            DCapIOne => s.doubles.intersection(&s.image).count() == 1,
            DCapIEmpty => s.doubles.is_disjoint(&s.image),
        }
    }

    /// Non-trivial cycle lengths, sorted descending.
    fn cycle_lengths(self) -> &'static [usize] {
        match self {
            Property::Identity => &[],
            Property::Transposition => &[2],
            Property::ThreeCycle => &[3],
            Property::FourCycle => &[4],
            Property::TwoDisjointTranspositions => &[2, 2],
            _ => unreachable!("not a permutation pattern"),
        }
    }
}

/// Lengths of the non-trivial cycles of `k` if it is a permutation.
fn cycle_type(k: &[u32]) -> Option<Vec<usize>> {
    let n = k.len();
    let values: BTreeSet<u32> = k.iter().copied().collect();
    if values.len() != n || values.iter().any(|&v| v == 0 || v as usize > n) {
        return None;
    }
    let mut seen = vec![false; n + 1];
    let mut lengths = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = k[i - 1] as usize;
            len += 1;
        }
        if len > 1 {
            lengths.push(len);
        }
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    Some(lengths)
}

/// Which of the two tables: no total transfer (`nu = 0`) or at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeSet {
    Partial,
    Total,
}

impl TypeSet {
    fn of(kappa: &Multiplet) -> Self {
        if kappa.nu() == 0 {
            TypeSet::Partial
        } else {
            TypeSet::Total
        }
    }
}

/// A transcribed table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub section: &'static str,
    pub ordinal: u32,
    pub representative: &'static str,
    pub occupation: &'static str,
    pub fixed_count: u32,
    pub property: &'static [Property],
    pub orbit_size: usize,
    /// `None` marks an orbit that no group realises.
    pub realizing: Option<&'static str>,
}

const fn row(
    section: &'static str,
    ordinal: u32,
    representative: &'static str,
    occupation: &'static str,
    fixed_count: u32,
    property: &'static [Property],
    orbit_size: usize,
    realizing: Option<&'static str>,
) -> TableRow {
    TableRow {
        section,
        ordinal,
        representative,
        occupation,
        fixed_count,
        property,
        orbit_size,
        realizing,
    }
}

use Property as P;

pub const TWO_PARTIAL: [TableRow; 7] = [
    row("A", 1, "111", "0300", 1, &[P::Constant], 3, None),
    row("B", 2, "121", "0210", 2, &[P::AlmostConstant], 6, None),
    row("B", 3, "112", "0210", 1, &[P::AlmostConstant], 6, None),
    row("S", 4, "211", "0210", 0, &[P::AlmostConstant], 6, Some("G_0^(m)(1,0)=S(2^m), m>=4")),
    row("Q", 5, "123", "0111", 3, &[P::Identity], 1, Some("G_0^(3)(0,1)=Q(8), m=3")),
    row("Q", 6, "132", "0111", 1, &[P::Transposition], 3, Some("G_0^(m)(0,1)=Q(2^m), m>=4")),
    row("C", 7, "231", "0111", 0, &[P::ThreeCycle], 2, None),
];

pub const TWO_TOTAL: [TableRow; 9] = [
    row("a", 1, "000", "3000", 0, &[P::Constant], 1, Some("C(2)xC(2), m=2")),
    row("b", 2, "100", "2100", 1, &[], 3, None),
    row("b", 3, "010", "2100", 0, &[], 6, None),
    row("c", 4, "110", "1200", 1, &[], 6, None),
    row("c", 5, "011", "1200", 0, &[], 3, None),
    row("e", 6, "120", "1110", 2, &[P::IdentityWithZero], 3, None),
    row("e", 7, "021", "1110", 1, &[], 6, None),
    row("d", 8, "210", "1110", 0, &[P::ZNotSubsetI], 3, Some("G_0^(m)(0,0)=D(2^m), m>=3")),
    row("e", 9, "012", "1110", 0, &[P::ZSubsetI], 6, None),
];

pub const THREE_PARTIAL: [TableRow; 19] = [
    row("A", 1, "1111", "04000", 1, &[P::Constant], 4, Some("G_0^(3)(0,1)")),
    row("B", 2, "1211", "03100", 2, &[P::AlmostConstant], 12, None),
    row("B", 3, "1112", "03100", 1, &[P::AlmostConstant], 24, None),
    row("H", 4, "2111", "03100", 0, &[P::AlmostConstant], 12, Some("G_1^(5,6)(1,1,1,1)")),
    row("D", 5, "1212", "02200", 2, &[], 12, Some("G_0^(4,5)(1,1,-1,1)")),
    row("E", 6, "1122", "02200", 1, &[], 12, Some("G_0^(m,m+1)(1,-1,1,1)")),
    row("F", 7, "2112", "02200", 0, &[], 12, Some("G_0^(m,m+e-2)(1,1,-1,1)")),
    row("E", 8, "1231", "02110", 3, &[], 12, Some("G_0^(m,m+1)(1,0,-1,1)")),
    row("E", 9, "1213", "02110", 2, &[], 24, Some("G_0^(m,m+1)(0,0,1,1)")),
    row("D", 10, "1123", "02110", 1, &[P::DMinusFSubsetI], 24, Some("G_0^(4,5)(0,0,-1,1)")),
    row("F", 11, "1321", "02110", 1, &[P::DMinusFNotSubsetI], 12, Some("G_0^(m,m+e-2)(1,1,0,0)")),
    row("F", 12, "3211", "02110", 1, &[P::DCapFEmpty], 24, Some("G_0^(m,m+e-2)(1,1,0,-1)")),
    row("F", 13, "2113", "02110", 0, &[P::DSubsetI], 24, Some("G_0^(m,m+e-2)(1,1,-1,0)")),
    row("E", 14, "2311", "02110", 0, &[P::DNotSubsetI], 24, Some("G_0^(m,m+1)(0,-1,1,1)")),
    row("C", 15, "1234", "01111", 4, &[P::Identity], 1, None),
    row("G", 16, "2134", "01111", 2, &[P::Transposition], 6, Some("G_1^(7,8)(1,0,0,1)")),
    row("C", 17, "1342", "01111", 1, &[P::ThreeCycle], 8, None),
    row("C", 18, "2341", "01111", 0, &[P::FourCycle], 6, None),
    row("G", 19, "2143", "01111", 0, &[P::TwoDisjointTranspositions], 3, Some("G_1^(5,6)(0,-1,-1,0)")),
];

pub const THREE_TOTAL: [TableRow; 26] = [
    row("a", 1, "0000", "40000", 0, &[P::Constant], 1, Some("G_1^(m)(0,±1), m>=5")),
    row("a", 2, "1000", "31000", 1, &[], 4, Some("G_0^(m)(0,1), m>=4")),
    row("a", 3, "0100", "31000", 0, &[], 12, Some("G_0^(m)(±1,0), m>=4")),
    row("e", 4, "1100", "22000", 1, &[], 12, None),
    row("e", 5, "0110", "22000", 0, &[], 12, None),
    row("e", 6, "1200", "21100", 2, &[], 6, None),
    row("e", 7, "1020", "21100", 1, &[], 24, None),
    row("e", 8, "0012", "21100", 0, &[P::DSubsetI], 12, None),
    row("e", 9, "0120", "21100", 0, &[P::DCapIOne], 24, None),
    row("b", 10, "2100", "21100", 0, &[P::DCapIEmpty], 6, Some("G_1^(6,8)(0,0,0,0)")),
    row("e", 11, "1110", "13000", 1, &[], 12, None),
    row("e", 12, "0111", "13000", 0, &[], 4, None),
    row("e", 13, "1210", "12100", 2, &[], 24, None),
    row("e", 14, "1120", "12100", 1, &[P::DMinusFSubsetI], 24, None),
    row("e", 15, "1012", "12100", 1, &[P::DMinusFNotSubsetI], 24, None),
    row("e", 16, "0211", "12100", 1, &[P::DCapFEmpty], 12, None),
    row("e", 17, "0112", "12100", 0, &[P::DCapIOne, P::ZSubsetI], 24, None),
    row("c", 18, "2011", "12100", 0, &[P::DCapIEmpty, P::ZSubsetI], 12, Some("G_0^(m,m+1)(0,-1,0,1)")),
    row("d", 19, "2110", "12100", 0, &[P::ZNotSubsetI], 24, Some("G_0^(m,m+e-2)(1,0,1,0)")),
    row("e", 20, "1230", "11110", 3, &[P::IdentityWithZero], 4, None),
    row("c", 21, "1203", "11110", 2, &[], 12, Some("G_0^(m,m+1)(0,0,0,1)")),
    row("e", 22, "1023", "11110", 1, &[P::ZSubsetI], 24, None),
    row("d", 23, "1320", "11110", 1, &[P::ZNotSubsetI], 12, Some("G_0^(m,m+e-2)(1,0,0,0)")),
    row("e", 24, "0123", "11110", 0, &[P::FourCycleWithZero], 24, None),
    row("d", 25, "0321", "11110", 0, &[P::TwoDisjointTranspositionsWithZero], 12, Some("G_0^(m,m+e-2)(0,1,0,0)")),
    row("e", 26, "2310", "11110", 0, &[P::ZNotSubsetI], 8, None),
];

/// Orbits marked impossible whose impossibility rests on the external
/// classification of metabelian 3-groups rather than on anything computed here.
pub const EXTERNAL_IMPOSSIBILITY: [(&str, u32); 3] = [("C", 15), ("C", 17), ("C", 18)];

pub fn table(p: u32, set: TypeSet) -> Result<&'static [TableRow], TypeclassError> {
    Ok(match (p, set) {
        (2, TypeSet::Partial) => &TWO_PARTIAL,
        (2, TypeSet::Total) => &TWO_TOTAL,
        (3, TypeSet::Partial) => &THREE_PARTIAL,
        (3, TypeSet::Total) => &THREE_TOTAL,
        _ => return Err(TypeclassError::UnsupportedPrimeForLabels(p)),
    })
}

fn parse_digits(s: &str) -> Vec<u32> {
    s.chars().map(|c| c.to_digit(10).expect("digit")).collect()
}

/// Realisability of an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realizing {
    Group(String),
    Impossible { external: bool },
}

impl fmt::Display for Realizing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realizing::Group(g) => f.write_str(g),
            Realizing::Impossible { .. } => f.write_str("impossible"),
        }
    }
}

/// An orbit with its labels; all numeric fields are computed from the
/// orbit itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub section: String,
    pub ordinal: u32,
    /// The representative displayed in the tables.
    pub representative: Multiplet,
    /// The lexicographically smallest member of the orbit.
    pub canonical: Multiplet,
    pub occupation: Vec<u32>,
    pub fixed_count: usize,
    pub property: Vec<Property>,
    pub orbit_size: usize,
    pub realizing: Realizing,
}

impl OrbitRecord {
    pub fn label(&self) -> String {
        format!("{}.{}", self.section, self.ordinal)
    }

    pub fn property_phrase(&self) -> String {
        self.property.iter().map(|p| p.phrase()).join(", ")
    }

    pub fn is_realizable(&self) -> bool {
        matches!(self.realizing, Realizing::Group(_))
    }
}

fn record(p: u32, row: &TableRow) -> OrbitRecord {
    let representative = Multiplet::new(parse_digits(row.representative));
    let orb = orbit(&representative);
    let stats = statistics(&representative);
    let external = p == 3 && EXTERNAL_IMPOSSIBILITY.contains(&(row.section, row.ordinal));
    OrbitRecord {
        section: row.section.to_string(),
        ordinal: row.ordinal,
        canonical: Multiplet::new(orb.iter().next().unwrap().clone()),
        occupation: stats.occupation,
        fixed_count: stats.fixed.len(),
        property: row.property.to_vec(),
        orbit_size: orb.len(),
        realizing: match row.realizing {
            Some(g) => Realizing::Group(g.to_string()),
            None => Realizing::Impossible { external },
        },
        representative,
    }
}

/// Unlabelled orbits of `[1, p+1]^{p+1}` (partial) or of its complement in
/// `[0, p+1]^{p+1}` (total), keyed by canonical representative.
pub fn raw_orbits(p: u32, set: TypeSet) -> BTreeMap<Multiplet, usize> {
    let n = p as usize + 1;
    let mut out = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for kappa in (0..n).map(|_| 0..=n as u32).multi_cartesian_product() {
        let kappa = Multiplet::new(kappa);
        if TypeSet::of(&kappa) != set || seen.contains(kappa.kappa()) {
            continue;
        }
        let orb = orbit(&kappa);
        let canonical = Multiplet::new(orb.iter().next().unwrap().clone());
        out.insert(canonical, orb.len());
        seen.extend(orb);
    }
    out
}

/// All labelled orbits in table order; every enumerated orbit must match
/// exactly one transcribed row.
pub fn enumerate_orbits(p: u32, set: TypeSet) -> Result<Vec<OrbitRecord>, TypeclassError> {
    let rows = table(p, set)?;
    let records: Vec<OrbitRecord> = rows.iter().map(|r| record(p, r)).collect();
    let raw = raw_orbits(p, set);
    let labelled: BTreeSet<&Multiplet> = records.iter().map(|r| &r.canonical).collect();
    assert_eq!(labelled.len(), records.len(), "two table rows share an orbit");
    assert!(
        raw.keys().eq(labelled.iter().copied()),
        "table rows do not cover the enumerated orbits"
    );
    Ok(records)
}

/// The labelled orbit containing `kappa`.
pub fn classify(kappa: &Multiplet, p: u32) -> Result<OrbitRecord, TypeclassError> {
    if kappa.degree() != p as usize + 1 {
        return Err(TypeclassError::InvalidMultiplet(kappa.to_string(), p));
    }
    let set = TypeSet::of(kappa);
    let canonical = canonical_representative(kappa);
    let rows = table(p, set)?;
    rows.iter()
        .map(|r| record(p, r))
        .find(|r| r.canonical == canonical)
        .ok_or_else(|| TypeclassError::InvalidMultiplet(kappa.to_string(), p))
}

fn total_text(p: u32, set: TypeSet, total: usize) -> String {
    let all = (p as usize + 2).pow(p + 1);
    match set {
        TypeSet::Partial => total.to_string(),
        TypeSet::Total => format!("{total}={all}-{}", all - total),
    }
}

fn digits(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect()
}

const HEADER: [&str; 8] = [
    "section",
    "ordinal",
    "representative",
    "occupation",
    "fixed_points",
    "property",
    "orbit_size",
    "realizing",
];

fn columns(r: &OrbitRecord) -> [String; 8] {
    [
        r.section.clone(),
        r.ordinal.to_string(),
        format!("({})", r.representative.digits()),
        format!("({})", digits(&r.occupation)),
        r.fixed_count.to_string(),
        r.property_phrase(),
        r.orbit_size.to_string(),
        r.realizing.to_string(),
    ]
}

/// CSV with a header line and a closing total row.
pub fn to_csv(p: u32, set: TypeSet, records: &[OrbitRecord]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in records {
        w.write_record(columns(r)).expect("in-memory write");
    }
    let total: usize = records.iter().map(|r| r.orbit_size).sum();
    w.write_record(["", "", "", "", "", "Total number:", &total_text(p, set, total), ""])
        .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn to_json(records: &[OrbitRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialise") + "\n"
}

/// Aligned plain-text table, one line per orbit plus header and total.
pub fn to_text(p: u32, set: TypeSet, records: &[OrbitRecord]) -> String {
    let titles = ["Sec.", "Nr.", "repres.", "occupation", "|F|", "charact. property", "cardinality", "realising group"];
    let mut rows: Vec<[String; 8]> = vec![titles.map(String::from)];
    rows.extend(records.iter().map(columns));
    let total: usize = records.iter().map(|r| r.orbit_size).sum();
    let mut last: [String; 8] = Default::default();
    last[5] = "Total number:".to_string();
    last[6] = total_text(p, set, total);
    rows.push(last);
    let widths: Vec<usize> = (0..8).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap()).collect();
    let mut out = String::new();
    for r in rows {
        let line = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                let pad = w - cell.chars().count();
                // numbers right-aligned, text left-aligned
                if matches!(c, 1 | 4 | 6) {
                    format!("{}{}", " ".repeat(pad), cell)
                } else {
                    format!("{}{}", cell, " ".repeat(pad))
                }
            })
            .join("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
