use super::{PcElement, PcGroup};

/// A subgroup stored as its generators together with a membership bitset
/// over the element indices of the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: u32,
    gens: Vec<PcElement>,
    place: Vec<usize>,
    bits: Vec<u64>,
    order: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.bits == other.bits
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub(super) fn whole(g: &PcGroup) -> Self {
        let words = g.order.div_ceil(64);
        let mut bits = vec![u64::MAX; words];
        let spare = words * 64 - g.order;
        if spare > 0 {
            bits[words - 1] >>= spare;
        }
        Subgroup {
            group: g.id,
            gens: vec![g.x.clone(), g.y.clone()],
            place: g.place.clone(),
            bits,
            order: g.order,
        }
    }

    pub(super) fn generated(g: &PcGroup, gens: Vec<PcElement>) -> Self {
        let gens: Vec<PcElement> = gens.into_iter().filter(|a| !a.is_identity()).collect();
        for a in &gens {
            assert!(g.owns(a), "generator from another group");
        }
        let mut bits = vec![0u64; g.order.div_ceil(64)];
        let mut queue = vec![g.identity()];
        set(&mut bits, 0);
        let mut order = 1;
        while let Some(a) = queue.pop() {
            for s in &gens {
                let b = g.mul(&a, s);
                let i = g.index_of(&b);
                if !get(&bits, i) {
                    set(&mut bits, i);
                    order += 1;
                    queue.push(b);
                }
            }
        }
        Subgroup {
            group: g.id,
            gens,
            place: g.place.clone(),
            bits,
            order,
        }
    }

    /// Smallest subgroup containing `gens` and normalised by `conjugators`.
    pub(super) fn normal_closure(g: &PcGroup, mut gens: Vec<PcElement>, conjugators: &[PcElement]) -> Self {
        loop {
            let h = Self::generated(g, gens.clone());
            let mut missing = Vec::new();
            for a in h.generators() {
                for c in conjugators {
                    let b = g.conj(a, c);
                    if !h.contains(&b) && !missing.contains(&b) {
                        missing.push(b);
                    }
                }
            }
            if missing.is_empty() {
                return h;
            }
            gens.extend(missing);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[PcElement] {
        &self.gens
    }

    /// Membership test; elements of other groups are never members.
    pub fn contains(&self, a: &PcElement) -> bool {
        if a.group != self.group {
            return false;
        }
        let i: usize = a.exps.iter().zip(&self.place).map(|(&e, &w)| e as usize * w).sum();
        get(&self.bits, i)
    }

    pub fn contains_index(&self, i: usize) -> bool {
        get(&self.bits, i)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Indices of the members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

fn get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}
