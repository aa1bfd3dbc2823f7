//! Positions of metabelian 3-groups of non-maximal class on the tree of all
//! metabelian 3-groups with abelianisation (3,3).

use serde::Serialize;
use thiserror::Error;

use crate::presentations::{validate_low, LowClassPresentation, PresentationError};
use crate::transfer::Multiplet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("rho = 0: the group has k = 0 and is not a terminal node with a predecessor")]
    NotTerminal,
    #[error("predecessor needs m >= 6 and e >= 4, got m = {m}, e = {e}")]
    PredecessorScope { m: u32, e: u32 },
    #[error("({alpha},{beta},{gamma},{delta}) is not a {kind:?} row of section d")]
    NotInSectionD {
        alpha: i8,
        beta: i8,
        gamma: i8,
        delta: i8,
        kind: NodeKind,
    },
    #[error("exponent {value} is outside -1..=1")]
    ExponentOutOfRange { value: i64 },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    Terminal,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Terminal,
    Internal,
    NotApplicable,
}

/// `(e, coclass, class) = (n - m + 2, n - m + 1, m - 1)`.
pub fn invariants_from_order(m: i64, n: i64) -> Result<(u32, u32, u32), TreeError> {
    let g = validate_low(m, n, 0, 0, 0, 0, 0)?;
    Ok((g.e(), g.coclass(), g.class()))
}

/// Kernel code of the equation `lambda j = -mu l` over F_3.
pub fn f(lambda: i8, mu: i8) -> u32 {
    match (lambda, mu) {
        (0, 0) => 0,
        (_, 0) => 1,
        (0, _) => 2,
        _ if lambda == -mu => 3,
        _ => 4,
    }
}

/// Checked variant of [`f`] for untrusted integers.
pub fn f_checked(lambda: i64, mu: i64) -> Result<u32, TreeError> {
    for value in [lambda, mu] {
        if !(-1..=1).contains(&value) {
            return Err(TreeError::ExponentOutOfRange { value });
        }
    }
    Ok(f(lambda as i8, mu as i8))
}

/// The internal predecessor `G / gamma_{m-1}(G)` of a terminal group with
/// `k = 1`: exponents `(rho delta, beta, rho beta, delta, 0)` on the shell
/// `(m - 1, n - 1)`.
pub fn predecessor(g: &LowClassPresentation) -> Result<LowClassPresentation, TreeError> {
    let [_, beta, _, delta, rho] = g.exponents().map(i64::from);
    if rho == 0 {
        return Err(TreeError::NotTerminal);
    }
    if g.m() < 6 || g.e() < 4 {
        return Err(TreeError::PredecessorScope { m: g.m(), e: g.e() });
    }
    Ok(validate_low(
        g.m() as i64 - 1,
        g.n() as i64 - 1,
        rho * delta,
        beta,
        rho * beta,
        delta,
        0,
    )?)
}

/// A row of the section d tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SectionDRow {
    pub label: &'static str,
    pub exponents: [i8; 4],
    pub kappa: [u32; 4],
}

pub const TERMINAL_ROWS: [SectionDRow; 5] = [
    SectionDRow { label: "d.19", exponents: [1, 0, 1, 0], kappa: [4, 0, 4, 3] },
    SectionDRow { label: "d.19", exponents: [1, 0, -1, 0], kappa: [3, 0, 4, 3] },
    SectionDRow { label: "d.23", exponents: [1, 0, 0, 0], kappa: [1, 0, 4, 3] },
    SectionDRow { label: "d.25", exponents: [0, 0, 1, 0], kappa: [2, 0, 4, 3] },
    SectionDRow { label: "d.25", exponents: [0, 0, -1, 0], kappa: [2, 0, 4, 3] },
];

pub const INTERNAL_ROWS: [SectionDRow; 5] = [
    SectionDRow { label: "d*.19", exponents: [0, 1, 0, 1], kappa: [0, 4, 4, 3] },
    SectionDRow { label: "d*.19", exponents: [0, -1, 0, 1], kappa: [0, 3, 4, 3] },
    SectionDRow { label: "d*.23", exponents: [0, 0, 0, 1], kappa: [0, 2, 4, 3] },
    SectionDRow { label: "d*.25", exponents: [0, 1, 0, 0], kappa: [0, 1, 4, 3] },
    SectionDRow { label: "d*.25", exponents: [0, -1, 0, 0], kappa: [0, 1, 4, 3] },
];

pub fn section_d_rows(kind: NodeKind) -> &'static [SectionDRow] {
    match kind {
        NodeKind::Terminal => &TERMINAL_ROWS,
        NodeKind::Internal => &INTERNAL_ROWS,
    }
}

fn section_d_row(exponents: [i8; 4], kind: NodeKind) -> Result<&'static SectionDRow, TreeError> {
    let [alpha, beta, gamma, delta] = exponents;
    section_d_rows(kind)
        .iter()
        .find(|r| r.exponents == exponents)
        .ok_or(TreeError::NotInSectionD { alpha, beta, gamma, delta, kind })
}

/// The tabulated transfer type of a section d group.
pub fn section_d_type(alpha: i8, beta: i8, gamma: i8, delta: i8, kind: NodeKind) -> Result<Multiplet, TreeError> {
    let row = section_d_row([alpha, beta, gamma, delta], kind)?;
    Ok(Multiplet::new(row.kappa.to_vec()))
}

/// Terminal for even `m >= 6` and `e >= 4`, internal for odd `m >= 7` and
/// `e >= 5`; mixed or small cases fall outside the rule.
pub fn parity_classification(m: u32, e: u32) -> Parity {
    if m >= 6 && e >= 4 && m % 2 == 0 && e % 2 == 0 {
        Parity::Terminal
    } else if m >= 7 && e >= 5 && m % 2 == 1 && e % 2 == 1 {
        Parity::Internal
    } else {
        Parity::NotApplicable
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreePosition {
    pub e: u32,
    pub coclass: u32,
    pub node_kind: NodeKind,
    pub section_label: String,
}

/// Combines a presentation with its node kind. Groups with `k = 1` are
/// always terminal; for `k = 0` the caller supplies the kind.
pub fn tree_position(g: &LowClassPresentation, kind: NodeKind) -> TreePosition {
    let node_kind = if g.k() == 1 { NodeKind::Terminal } else { kind };
    let [alpha, beta, gamma, delta, _] = g.exponents();
    let section_label = match section_d_row([alpha, beta, gamma, delta], node_kind) {
        Ok(row) if g.k() == 0 => row.label.to_string(),
        _ => "other".to_string(),
    };
    TreePosition {
        e: g.e(),
        coclass: g.coclass(),
        node_kind,
        section_label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::Presentation;
    use crate::transfer::transfer_multiplet;

    #[test]
    fn invariants() {
        assert_eq!(invariants_from_order(6, 8).unwrap(), (4, 3, 5));
        assert_eq!(invariants_from_order(7, 10).unwrap(), (5, 4, 6));
        assert_eq!(invariants_from_order(4, 5).unwrap(), (3, 2, 3));
        assert!(matches!(invariants_from_order(5, 9), Err(TreeError::Presentation(_))));
    }

    #[test]
    fn f_values() {
        assert_eq!(f(0, 0), 0);
        assert_eq!(f(1, -1), 3);
        assert_eq!(f(-1, -1), 4);
        assert_eq!(f(-1, 0), 1);
        assert_eq!(f(0, -1), 2);
        assert_eq!(f_checked(2, 0), Err(TreeError::ExponentOutOfRange { value: 2 }));
        for l in -1..=1 {
            for m in -1..=1 {
                assert_eq!(f(-l, -m), f(l, m));
            }
        }
    }

    #[test]
    fn predecessor_examples() {
        let g = validate_low(7, 9, 1, 1, -1, 0, 1).unwrap();
        let h = predecessor(&g).unwrap();
        assert_eq!((h.exponents(), h.m(), h.n()), ([0, 1, 1, 0, 0], 6, 8));
        let g2 = validate_low(7, 9, 0, -1, 0, 1, -1).unwrap();
        let h2 = predecessor(&g2).unwrap();
        assert_eq!((h2.exponents(), h2.m(), h2.n()), ([-1, -1, 1, 1, 0], 6, 8));
        for (a, b) in [(g, h), (g2, h2)] {
            assert_eq!(
                transfer_multiplet(&Presentation::Low(a)).unwrap(),
                transfer_multiplet(&Presentation::Low(b)).unwrap()
            );
        }
        assert_eq!(predecessor(&validate_low(7, 9, 0, 0, 0, 0, 0).unwrap()), Err(TreeError::NotTerminal));
    }

    #[test]
    fn section_d_examples() {
        assert_eq!(section_d_type(1, 0, 1, 0, NodeKind::Terminal).unwrap().kappa(), &[4, 0, 4, 3]);
        assert_eq!(section_d_type(0, 0, 0, 1, NodeKind::Internal).unwrap().kappa(), &[0, 2, 4, 3]);
        assert_eq!(section_d_type(0, 0, -1, 0, NodeKind::Terminal).unwrap().kappa(), &[2, 0, 4, 3]);
        assert!(section_d_type(0, 0, 0, 1, NodeKind::Terminal).is_err());
    }

    #[test]
    fn parity() {
        assert_eq!(parity_classification(6, 4), Parity::Terminal);
        assert_eq!(parity_classification(7, 5), Parity::Internal);
        assert_eq!(parity_classification(6, 5), Parity::NotApplicable);
        assert_eq!(parity_classification(4, 4), Parity::NotApplicable);
    }

    #[test]
    fn positions() {
        let g = validate_low(6, 8, 1, 0, 0, 0, 0).unwrap();
        let pos = tree_position(&g, NodeKind::Terminal);
        assert_eq!((pos.e, pos.coclass, pos.section_label.as_str()), (4, 3, "d.23"));
        let k1 = validate_low(7, 9, 1, 0, 0, 0, 1).unwrap();
        assert_eq!(tree_position(&k1, NodeKind::Internal).node_kind, NodeKind::Terminal);
    }
}
