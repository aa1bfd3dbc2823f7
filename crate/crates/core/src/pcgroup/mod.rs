//! A small power-conjugate presentation engine for finite p-groups.
//!
//! Elements are exponent vectors in collected normal form
//! `g_1^{e_1} ... g_n^{e_n}` with `0 <= e_i < r_i`. Products are computed by
//! collection from the left. The engine is meant for groups of at most
//! [`ORDER_CAP`] elements; subgroups are materialised as element sets.

mod families;
mod subgroup;

use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

pub use families::{build_max_class_group, main_commutator, maximal_subgroups, ORACLE_TWO_GROUP_MAX_M};
pub use subgroup::Subgroup;

/// Largest group order the engine will materialise.
pub const ORDER_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcError {
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("presentation is out of oracle scope: {0}")]
    OutOfOracleScope(String),
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("group order {0} exceeds the cap of {ORDER_CAP} elements")]
    OrderTooLarge(u128),
}

/// A word as a list of `(generator, exponent)` letters.
pub(crate) type Word = Vec<(usize, u32)>;

/// Relative orders plus power and conjugation relations, all right-hand
/// sides given as normal-form exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcPresentation {
    rel_orders: Vec<u32>,
    /// `power_rels[i]` is `g_i^{r_i}`.
    power_rels: Vec<Vec<u32>>,
    /// `conj_rels[j][i]` is `g_j^{g_i}` for `i < j`.
    conj_rels: Vec<Vec<Vec<u32>>>,
    power_words: Vec<Word>,
    conj_words: Vec<Vec<Word>>,
}

fn to_word(exps: &[u32]) -> Word {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(g, &e)| (g, e))
        .collect()
}

impl PcPresentation {
    /// A presentation with trivial power relations and commuting generators;
    /// relations are filled in with [`set_power`](Self::set_power) and
    /// [`set_conjugate`](Self::set_conjugate).
    pub fn trivial(rel_orders: Vec<u32>) -> Self {
        let n = rel_orders.len();
        let unit = |k: usize| {
            let mut v = vec![0; n];
            v[k] = 1;
            v
        };
        let conj_rels: Vec<Vec<Vec<u32>>> = (0..n).map(|j| (0..j).map(|_| unit(j)).collect()).collect();
        let conj_words = conj_rels
            .iter()
            .map(|row| row.iter().map(|v| to_word(v)).collect())
            .collect();
        PcPresentation {
            power_rels: vec![vec![0; n]; n],
            power_words: vec![Vec::new(); n],
            conj_rels,
            conj_words,
            rel_orders,
        }
    }

    pub fn ngens(&self) -> usize {
        self.rel_orders.len()
    }

    pub fn rel_orders(&self) -> &[u32] {
        &self.rel_orders
    }

    pub fn power_rel(&self, i: usize) -> &[u32] {
        &self.power_rels[i]
    }

    pub fn conj_rel(&self, j: usize, i: usize) -> &[u32] {
        &self.conj_rels[j][i]
    }

    /// Sets `g_i^{r_i} = rhs`; `rhs` must only involve generators after `i`.
    pub fn set_power(&mut self, i: usize, rhs: Vec<u32>) {
        assert!(rhs[..=i].iter().all(|&e| e == 0), "power relation must lie deeper in the series");
        self.power_words[i] = to_word(&rhs);
        self.power_rels[i] = rhs;
    }

    /// Sets `g_j^{g_i} = rhs` for `i < j`; `rhs` must be `g_j` times deeper terms.
    pub fn set_conjugate(&mut self, j: usize, i: usize, rhs: Vec<u32>) {
        assert!(i < j);
        assert!(
            rhs[..j].iter().all(|&e| e == 0) && rhs[j] == 1,
            "conjugate relation must have leading term g_j"
        );
        self.conj_words[j][i] = to_word(&rhs);
        self.conj_rels[j][i] = rhs;
    }

    /// Multiplies the normal form `exps` on the right by `word`, in place.
    pub(crate) fn collect(&self, exps: &mut [u32], word: &[(usize, u32)]) {
        let mut stack: Vec<(usize, u32)> = word.iter().rev().copied().collect();
        let mut tail: Vec<(usize, u32)> = Vec::new();
        while let Some((g, e)) = stack.pop() {
            if e == 0 {
                continue;
            }
            let r = self.rel_orders[g];
            if exps[g + 1..].iter().all(|&v| v == 0) {
                let total = exps[g] + e;
                exps[g] = total % r;
                for _ in 0..total / r {
                    stack.extend(self.power_words[g].iter().rev());
                }
                continue;
            }
            // g^a T g^e = g^{a+1} T^g g^{e-1}
            tail.clear();
            for (h, v) in exps.iter_mut().enumerate().skip(g + 1) {
                if *v != 0 {
                    tail.push((h, *v));
                    *v = 0;
                }
            }
            if e > 1 {
                stack.push((g, e - 1));
            }
            for &(h, t) in tail.iter().rev() {
                for _ in 0..t {
                    stack.extend(self.conj_words[h][g].iter().rev());
                }
            }
            exps[g] += 1;
            if exps[g] == r {
                exps[g] = 0;
                stack.extend(self.power_words[g].iter().rev());
            }
        }
    }

    pub(crate) fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = a.to_vec();
        self.collect(&mut out, &to_word(b));
        out
    }

    pub(crate) fn inverse(&self, a: &[u32]) -> Vec<u32> {
        let mut rest = a.to_vec();
        let mut inv = vec![0; a.len()];
        for i in 0..a.len() {
            let e = rest[i];
            if e != 0 {
                let t = self.rel_orders[i] - e;
                self.collect(&mut rest, &[(i, t)]);
                self.collect(&mut inv, &[(i, t)]);
            }
        }
        debug_assert!(rest.iter().all(|&v| v == 0));
        inv
    }

    /// `a^n` for `n >= 0` by square and multiply.
    pub(crate) fn power_nonneg(&self, a: &[u32], mut n: u128) -> Vec<u32> {
        let mut result = vec![0; a.len()];
        let mut base = a.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                result = self.multiply(&result, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.multiply(&base, &base);
            }
        }
        result
    }

    fn order_bound(&self) -> u128 {
        self.rel_orders.iter().map(|&r| r as u128).product()
    }

    pub(crate) fn power(&self, a: &[u32], n: i128) -> Vec<u32> {
        // element orders divide the group order
        let bound = self.order_bound() as i128;
        self.power_nonneg(a, n.rem_euclid(bound) as u128)
    }

    /// Runs the standard associativity tests on generator triples and power
    /// relations; an empty result means the presentation is consistent.
    pub fn consistency_failures(&self) -> Vec<String> {
        let n = self.ngens();
        let unit = |k: usize| {
            let mut v = vec![0; n];
            v[k] = 1;
            v
        };
        let mut failures = Vec::new();
        let mut check = |label: String, lhs: Vec<u32>, rhs: Vec<u32>| {
            if lhs != rhs {
                failures.push(label);
            }
        };
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let (gi, gj, gk) = (unit(i), unit(j), unit(k));
                    let lhs = self.multiply(&self.multiply(&gk, &gj), &gi);
                    let rhs = self.multiply(&gk, &self.multiply(&gj, &gi));
                    check(format!("(g{k} g{j}) g{i}"), lhs, rhs);
                }
            }
        }
        for j in 0..n {
            let gj = unit(j);
            let rj = self.rel_orders[j] as u128;
            for i in 0..j {
                let gi = unit(i);
                // (g_j^{r_j}) g_i against g_j^{r_j - 1} (g_j g_i)
                let lhs = self.multiply(&self.power_rels[j], &gi);
                let rhs = self.multiply(&self.power_nonneg(&gj, rj - 1), &self.multiply(&gj, &gi));
                check(format!("g{j}^r g{i}"), lhs, rhs);
                // g_j (g_i^{r_i}) against (g_j g_i) g_i^{r_i - 1}
                let ri = self.rel_orders[i] as u128;
                let lhs = self.multiply(&gj, &self.power_rels[i]);
                let rhs = self.multiply(&self.multiply(&gj, &gi), &self.power_nonneg(&gi, ri - 1));
                check(format!("g{j} g{i}^r"), lhs, rhs);
            }
            let lhs = self.multiply(&gj, &self.power_rels[j]);
            let rhs = self.multiply(&self.power_rels[j], &gj);
            check(format!("g{j} g{j}^r"), lhs, rhs);
        }
        failures
    }
}

static NEXT_GROUP_ID: AtomicU32 = AtomicU32::new(1);

/// An element in collected normal form, tagged with the group it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcElement {
    group: u32,
    exps: Vec<u32>,
}

impl PcElement {
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// A finite p-group given by a consistent pc presentation and a pair of
/// distinguished generators `x, y`.
#[derive(Debug)]
pub struct PcGroup {
    id: u32,
    p: u32,
    pres: PcPresentation,
    place: Vec<usize>,
    order: usize,
    x: PcElement,
    y: PcElement,
    label: String,
}

impl PcGroup {
    /// Wraps a presentation, verifying consistency and that `x, y` generate
    /// a group of order `prod r_i`.
    pub fn new(p: u32, pres: PcPresentation, x: Vec<u32>, y: Vec<u32>, label: impl Into<String>) -> Result<Self, PcError> {
        let order = pres.order_bound();
        if order > ORDER_CAP as u128 {
            return Err(PcError::OrderTooLarge(order));
        }
        let failures = pres.consistency_failures();
        if !failures.is_empty() {
            return Err(PcError::InconsistentPresentation(failures.join(", ")));
        }
        let n = pres.ngens();
        let mut place = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            place[i] = place[i + 1] * pres.rel_orders[i + 1] as usize;
        }
        let id = NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed);
        let group = PcGroup {
            id,
            p,
            pres,
            place,
            order: order as usize,
            x: PcElement { group: id, exps: x },
            y: PcElement { group: id, exps: y },
            label: label.into(),
        };
        let generated = group.subgroup(vec![group.x.clone(), group.y.clone()]);
        if generated.order() != group.order {
            return Err(PcError::InconsistentPresentation(format!(
                "x and y generate {} of {} elements",
                generated.order(),
                group.order
            )));
        }
        Ok(group)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn x(&self) -> &PcElement {
        &self.x
    }

    pub fn y(&self) -> &PcElement {
        &self.y
    }

    pub fn identity(&self) -> PcElement {
        self.wrap(vec![0; self.pres.ngens()])
    }

    /// The element with the given exponent vector, reduced into normal form.
    pub fn element(&self, exps: &[u32]) -> PcElement {
        assert_eq!(exps.len(), self.pres.ngens());
        let mut out = vec![0; exps.len()];
        self.pres.collect(&mut out, &to_word(exps));
        self.wrap(out)
    }

    /// The `i`-th polycyclic generator.
    pub fn generator(&self, i: usize) -> PcElement {
        let mut v = vec![0; self.pres.ngens()];
        v[i] = 1;
        self.wrap(v)
    }

    fn wrap(&self, exps: Vec<u32>) -> PcElement {
        PcElement { group: self.id, exps }
    }

    fn owns(&self, a: &PcElement) -> bool {
        a.group == self.id
    }

    fn check(&self, a: &PcElement) -> Result<(), PcError> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(PcError::GroupMismatch)
        }
    }

    /// Position of `a` in lexicographic order of exponent vectors.
    pub fn index_of(&self, a: &PcElement) -> usize {
        a.exps.iter().zip(&self.place).map(|(&e, &w)| e as usize * w).sum()
    }

    pub fn element_at(&self, mut index: usize) -> PcElement {
        let mut exps = vec![0; self.pres.ngens()];
        for (e, &w) in exps.iter_mut().zip(&self.place) {
            *e = (index / w) as u32;
            index %= w;
        }
        self.wrap(exps)
    }

    pub fn elements(&self) -> impl Iterator<Item = PcElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    /// Product; panics if either factor belongs to another group.
    pub fn mul(&self, a: &PcElement, b: &PcElement) -> PcElement {
        assert!(self.owns(a) && self.owns(b), "element from another group");
        self.wrap(self.pres.multiply(&a.exps, &b.exps))
    }

    pub fn inv(&self, a: &PcElement) -> PcElement {
        assert!(self.owns(a), "element from another group");
        self.wrap(self.pres.inverse(&a.exps))
    }

    pub fn pow(&self, a: &PcElement, n: i64) -> PcElement {
        assert!(self.owns(a), "element from another group");
        self.wrap(self.pres.power(&a.exps, n as i128))
    }

    /// `a^b = b^{-1} a b`.
    pub fn conj(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.mul(&self.mul(&self.inv(b), a), b)
    }

    /// `[a, b] = a^{-1} b^{-1} a b = a^{-1} a^b`.
    pub fn comm(&self, a: &PcElement, b: &PcElement) -> PcElement {
        self.mul(&self.inv(a), &self.conj(a, b))
    }

    pub fn multiply(&self, a: &PcElement, b: &PcElement) -> Result<PcElement, PcError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &PcElement) -> Result<PcElement, PcError> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    pub fn power(&self, a: &PcElement, n: i64) -> Result<PcElement, PcError> {
        self.check(a)?;
        Ok(self.pow(a, n))
    }

    pub fn commutator(&self, a: &PcElement, b: &PcElement) -> Result<PcElement, PcError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.comm(a, b))
    }

    /// The ordered product `g * g^h * g^{h^2} * ... * g^{h^{n-1}}`, i.e. `g`
    /// raised to the trace element `1 + h + ... + h^{n-1}` of the group ring.
    pub fn symbolic_trace_power(&self, g: &PcElement, h: &PcElement, n: u32) -> Result<PcElement, PcError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.trace_power(g, h, n))
    }

    pub(crate) fn trace_power(&self, g: &PcElement, h: &PcElement, n: u32) -> PcElement {
        let h_inv = self.inv(h);
        let mut term = g.clone();
        let mut acc = g.clone();
        for _ in 1..n {
            term = self.mul(&self.mul(&h_inv, &term), h);
            acc = self.mul(&acc, &term);
        }
        acc
    }

    pub fn element_order(&self, a: &PcElement) -> usize {
        let mut k = 1;
        let mut cur = a.clone();
        while !cur.is_identity() {
            cur = self.mul(&cur, a);
            k += 1;
        }
        k
    }

    /// All elements of `G`, as a subgroup.
    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(self)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup(Vec::new())
    }

    pub fn subgroup(&self, gens: Vec<PcElement>) -> Subgroup {
        Subgroup::generated(self, gens)
    }

    /// `[A, B]`, the normal closure in `<A, B>` of commutators of generators.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for u in a.generators() {
            for v in b.generators() {
                let c = self.comm(u, v);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        let conjugators: Vec<PcElement> = a.generators().iter().chain(b.generators()).cloned().collect();
        Subgroup::normal_closure(self, comms, &conjugators)
    }

    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        self.commutator_subgroup(h, h)
    }

    /// `gamma_1 = G, gamma_j = [gamma_{j-1}, G]`, down to the trivial group.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let last = series.last().unwrap();
            if last.order() == 1 {
                break;
            }
            let next = self.commutator_subgroup(last, &g);
            assert!(next.order() < last.order(), "lower central series stalled: group is not nilpotent");
            series.push(next);
        }
        series
    }
}
