//! Parametric families of metabelian p-groups.
//!
//! Two families are modelled:
//!
//! * [`MaxClassPresentation`]: metabelian p-groups of maximal class with
//!   abelianisation of type (p,p), written `G_a^(m)(w,z)`, of order `p^m`.
//!   The degenerate abelian group of type (p,p) is the case `m = 2`.
//! * [`LowClassPresentation`]: metabelian 3-groups of non-maximal class,
//!   written `G_rho^(m,n)(alpha,beta,gamma,delta)`, of order `3^n` and
//!   nilpotency class `m - 1`.
//!
//! Values of both types can only be obtained through validation, so every
//! downstream operation may rely on the documented invariants.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("p = {0} is not a prime")]
    PrimeRequired(i64),
    #[error("nilpotency index m = {m} is out of range ({reason})")]
    NilpotencyIndexOutOfRange { m: i64, reason: &'static str },
    #[error("k = {k} is out of range for p = {p}, m = {m} (allowed 0..={max})")]
    KOutOfRange { p: i64, m: i64, k: i64, max: i64 },
    #[error("exponent {name} = {value} is out of range {lo}..={hi}")]
    ExponentOutOfRange {
        name: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("the a-vector has length {len} but k = {k}")]
    AVectorLength { len: usize, k: i64 },
    #[error("leading relational exponent a(m-k) must be positive")]
    ALeadingZero,
    #[error("(w, z, m) = ({w}, {z}, {m}) is not one of the dihedral, quaternion or semidihedral 2-groups")]
    InvalidTwoFamily { w: i64, z: i64, m: i64 },
    #[error("(m, n) = ({m}, {n}) violates 4 <= m < n <= 2m - 3")]
    IndexRangeViolation { m: i64, n: i64 },
}

pub type Result<T> = std::result::Result<T, PresentationError>;

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The three isomorphism types of non-abelian 2-groups of maximal class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TwoFamily {
    Dihedral,
    Quaternion,
    Semidihedral,
}

impl TwoFamily {
    pub fn letter(self) -> char {
        match self {
            TwoFamily::Dihedral => 'D',
            TwoFamily::Quaternion => 'Q',
            TwoFamily::Semidihedral => 'S',
        }
    }

    /// The relational exponents `(w, z)` carried by this family.
    pub fn exponents(self) -> (u32, u32) {
        match self {
            TwoFamily::Dihedral => (0, 0),
            TwoFamily::Quaternion => (0, 1),
            TwoFamily::Semidihedral => (1, 0),
        }
    }

    pub fn min_index(self) -> u32 {
        match self {
            TwoFamily::Semidihedral => 4,
            _ => 3,
        }
    }
}

/// A metabelian p-group of maximal class `G_a^(m)(w,z)` of order `p^m`.
///
/// Generators `x, y` and higher commutators `s_2 = [y,x]`,
/// `s_j = [s_{j-1}, x]` satisfy
///
/// ```text
/// x^p = s_{m-1}^z,     y^p * prod_{l=2}^{p} s_l^{C(p,l)} = s_{m-1}^w,
/// [y, s_2] = prod_{r=1}^{k} s_{m-r}^{a(m-r)}.
/// ```
///
/// `w` is the first and `z` the second argument of the family name, so the
/// quaternion group `Q(2^m) = G_0^(m)(0,1)` has `x^2 = s_{m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaxClassPresentation {
    p: u32,
    m: u32,
    k: u32,
    a: Vec<u32>,
    w: u32,
    z: u32,
}

impl MaxClassPresentation {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// `(a(m-k), ..., a(m-1))`, empty when `k = 0`.
    pub fn a(&self) -> &[u32] {
        &self.a
    }
    pub fn w(&self) -> u32 {
        self.w
    }
    pub fn z(&self) -> u32 {
        self.z
    }

    /// Exponent `e` in `x^p = s_{m-1}^e`.
    pub fn x_power_exponent(&self) -> u32 {
        self.z
    }

    /// Exponent `e` in `y^p * prod s_l^{C(p,l)} = s_{m-1}^e`.
    pub fn y_power_exponent(&self) -> u32 {
        self.w
    }

    pub fn is_abelian(&self) -> bool {
        self.m == 2
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.m)
    }

    /// Family tag for `p = 2`; `None` for odd `p` and for the abelian case.
    pub fn two_family(&self) -> Option<TwoFamily> {
        if self.p != 2 || self.m == 2 {
            return None;
        }
        match (self.w, self.z) {
            (0, 0) => Some(TwoFamily::Dihedral),
            (0, 1) => Some(TwoFamily::Quaternion),
            (1, 0) => Some(TwoFamily::Semidihedral),
            _ => None,
        }
    }

    pub fn abelian(p: u32) -> Result<Self> {
        validate_max(p as i64, 2, 0, &[], 0, 0)
    }

    pub fn two_group(family: TwoFamily, m: u32) -> Result<Self> {
        let (w, z) = family.exponents();
        validate_max(2, m as i64, 0, &[], w as i64, z as i64)
    }
}

fn check_range(name: &'static str, value: i64, lo: i64, hi: i64) -> Result<u32> {
    if value < lo || value > hi {
        return Err(PresentationError::ExponentOutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(value as u32)
}

/// Upper bound for the invariant `k` of a maximal-class group of order `p^m`.
pub fn max_k(p: i64, m: i64) -> i64 {
    if m <= 3 {
        0
    } else if m >= p + 1 {
        (m - 4).min(p - 2).max(0)
    } else {
        m - 4
    }
}

pub fn validate_max(p: i64, m: i64, k: i64, a: &[i64], w: i64, z: i64) -> Result<MaxClassPresentation> {
    if !is_prime(p) {
        return Err(PresentationError::PrimeRequired(p));
    }
    if m < 2 {
        return Err(PresentationError::NilpotencyIndexOutOfRange {
            m,
            reason: "m >= 2 required",
        });
    }
    let kmax = max_k(p, m);
    if k < 0 || k > kmax {
        return Err(PresentationError::KOutOfRange { p, m, k, max: kmax });
    }
    if a.len() as i64 != k {
        return Err(PresentationError::AVectorLength { len: a.len(), k });
    }
    let a = a
        .iter()
        .map(|&v| check_range("a", v, 0, p - 1))
        .collect::<Result<Vec<_>>>()?;
    if k >= 1 && a[0] == 0 {
        return Err(PresentationError::ALeadingZero);
    }
    let w = check_range("w", w, 0, p - 1)?;
    let z = check_range("z", z, 0, p - 1)?;
    if m == 2 {
        // the abelian group of type (p,p) carries no relational exponents
        check_range("w", w as i64, 0, 0)?;
        check_range("z", z as i64, 0, 0)?;
    } else if p == 2 {
        let ok = matches!((w, z, m), (0, 0, _) | (0, 1, _) | (1, 0, 4..));
        if !ok {
            return Err(PresentationError::InvalidTwoFamily {
                w: w as i64,
                z: z as i64,
                m,
            });
        }
    }
    Ok(MaxClassPresentation {
        p: p as u32,
        m: m as u32,
        k: k as u32,
        a,
        w,
        z,
    })
}

/// A metabelian 3-group `G_rho^(m,n)(alpha,beta,gamma,delta)` of order `3^n`,
/// class `m - 1` and abelianisation of type (3,3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LowClassPresentation {
    m: u32,
    n: u32,
    alpha: i8,
    beta: i8,
    gamma: i8,
    delta: i8,
    rho: i8,
}

impl LowClassPresentation {
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn alpha(&self) -> i8 {
        self.alpha
    }
    pub fn beta(&self) -> i8 {
        self.beta
    }
    pub fn gamma(&self) -> i8 {
        self.gamma
    }
    pub fn delta(&self) -> i8 {
        self.delta
    }
    pub fn rho(&self) -> i8 {
        self.rho
    }
    pub fn exponents(&self) -> [i8; 5] {
        [self.alpha, self.beta, self.gamma, self.delta, self.rho]
    }

    /// `e = n - m + 2`, the index of the first cyclic factor after `gamma_3`.
    pub fn e(&self) -> u32 {
        self.n - self.m + 2
    }
    pub fn coclass(&self) -> u32 {
        self.n - self.m + 1
    }
    pub fn class(&self) -> u32 {
        self.m - 1
    }
    /// `k = 0` exactly when `rho = 0`.
    pub fn k(&self) -> u32 {
        u32::from(self.rho != 0)
    }

    /// Lower than second maximal class with the index bounds under which the
    /// kernel formulas hold: `e >= 4`, and `m >= 6` or `m = 5, k = 0`.
    pub fn in_kernel_scope(&self) -> bool {
        self.e() >= 4 && (self.m >= 6 || (self.m == 5 && self.rho == 0))
    }
}

pub fn validate_low(m: i64, n: i64, alpha: i64, beta: i64, gamma: i64, delta: i64, rho: i64) -> Result<LowClassPresentation> {
    if m < 4 || n <= m || n > 2 * m - 3 {
        return Err(PresentationError::IndexRangeViolation { m, n });
    }
    let unit = |name, v| check_range(name, v, -1, 1).map(|_| v as i8);
    Ok(LowClassPresentation {
        m: m as u32,
        n: n as u32,
        alpha: unit("alpha", alpha)?,
        beta: unit("beta", beta)?,
        gamma: unit("gamma", gamma)?,
        delta: unit("delta", delta)?,
        rho: unit("rho", rho)?,
    })
}

/// Either family, as carried through the command line and JSON files.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Presentation {
    Max(MaxClassPresentation),
    Low(LowClassPresentation),
}

impl Presentation {
    pub fn p(&self) -> u32 {
        match self {
            Presentation::Max(g) => g.p,
            Presentation::Low(_) => 3,
        }
    }

    pub fn family_name(&self) -> String {
        match self {
            Presentation::Max(g) => family_name_max(g),
            Presentation::Low(g) => family_name_low(g),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, JsonPresentationError> {
        let raw: RawPresentation = serde_json::from_str(text)?;
        Ok(raw.validate()?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawPresentation::from(self)).expect("presentation serialises")
    }
}

impl From<MaxClassPresentation> for Presentation {
    fn from(g: MaxClassPresentation) -> Self {
        Presentation::Max(g)
    }
}

impl From<LowClassPresentation> for Presentation {
    fn from(g: LowClassPresentation) -> Self {
        Presentation::Low(g)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.family_name())
    }
}

fn subscript_a(a: &[u32]) -> String {
    match a {
        [] => "0".to_string(),
        [v] => v.to_string(),
        _ => format!("({})", a.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
    }
}

pub fn family_name_max(g: &MaxClassPresentation) -> String {
    if g.m == 2 {
        return format!("C({p}) x C({p})", p = g.p);
    }
    let generic = format!("G_{}^({})({},{})", subscript_a(&g.a), g.m, g.w, g.z);
    match g.two_family() {
        Some(fam) => format!("{}({}) = {}", fam.letter(), 1u64 << g.m, generic),
        None => generic,
    }
}

pub fn family_name_low(g: &LowClassPresentation) -> String {
    format!(
        "G_{}^({},{})({},{},{},{})",
        g.rho, g.m, g.n, g.alpha, g.beta, g.gamma, g.delta
    )
}

#[derive(Debug, Error)]
pub enum JsonPresentationError {
    #[error("malformed presentation JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] PresentationError),
}

/// Wire form; absent fields are not applicable to the given kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawPresentation {
    Max {
        p: i64,
        m: i64,
        #[serde(default)]
        k: i64,
        #[serde(default)]
        a: Vec<i64>,
        #[serde(default)]
        w: i64,
        #[serde(default)]
        z: i64,
    },
    Low {
        m: i64,
        n: i64,
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        rho: i64,
    },
}

impl RawPresentation {
    fn validate(self) -> Result<Presentation> {
        match self {
            RawPresentation::Max { p, m, k, a, w, z } => validate_max(p, m, k, &a, w, z).map(Presentation::Max),
            RawPresentation::Low {
                m,
                n,
                alpha,
                beta,
                gamma,
                delta,
                rho,
            } => validate_low(m, n, alpha, beta, gamma, delta, rho).map(Presentation::Low),
        }
    }
}

impl From<&Presentation> for RawPresentation {
    fn from(p: &Presentation) -> Self {
        match p {
            Presentation::Max(g) => RawPresentation::Max {
                p: g.p as i64,
                m: g.m as i64,
                k: g.k as i64,
                a: g.a.iter().map(|&v| v as i64).collect(),
                w: g.w as i64,
                z: g.z as i64,
            },
            Presentation::Low(g) => RawPresentation::Low {
                m: g.m as i64,
                n: g.n as i64,
                alpha: g.alpha as i64,
                beta: g.beta as i64,
                gamma: g.gamma as i64,
                delta: g.delta as i64,
                rho: g.rho as i64,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quaternion_eight_is_valid() {
        let q = validate_max(2, 3, 0, &[], 0, 1).unwrap();
        assert_eq!(q.two_family(), Some(TwoFamily::Quaternion));
        assert_eq!(family_name_max(&q), "Q(8) = G_0^(3)(0,1)");
    }

    #[test]
    fn k_forced_zero_for_m3() {
        assert!(matches!(
            validate_max(3, 3, 1, &[1], 0, 0),
            Err(PresentationError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn k_at_bound() {
        let g = validate_max(5, 6, 2, &[1, 0], 0, 0).unwrap();
        assert_eq!(g.k(), 2);
        assert!(matches!(
            validate_max(5, 6, 3, &[1, 0, 0], 0, 0),
            Err(PresentationError::KOutOfRange { max: 2, .. })
        ));
        // m >= p + 1 caps k by p - 2
        assert_eq!(max_k(3, 9), 1);
        assert_eq!(max_k(7, 6), 2);
    }

    #[test]
    fn max_errors() {
        assert!(matches!(validate_max(4, 3, 0, &[], 0, 0), Err(PresentationError::PrimeRequired(4))));
        assert!(matches!(validate_max(5, 6, 1, &[0], 0, 0), Err(PresentationError::ALeadingZero)));
        assert!(matches!(
            validate_max(3, 4, 0, &[], 3, 0),
            Err(PresentationError::ExponentOutOfRange { name: "w", .. })
        ));
        assert!(matches!(
            validate_max(2, 3, 0, &[], 1, 0),
            Err(PresentationError::InvalidTwoFamily { .. })
        ));
        assert!(matches!(
            validate_max(2, 5, 0, &[], 1, 1),
            Err(PresentationError::InvalidTwoFamily { .. })
        ));
        assert!(matches!(
            validate_max(3, 2, 0, &[], 1, 0),
            Err(PresentationError::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn low_examples() {
        let g = validate_low(6, 8, 1, 0, 0, 0, 0).unwrap();
        assert_eq!((g.e(), g.k()), (4, 0));
        assert!(matches!(
            validate_low(5, 9, 0, 0, 0, 1, 0),
            Err(PresentationError::IndexRangeViolation { .. })
        ));
        let g = validate_low(7, 10, 0, 1, 0, 0, 0).unwrap();
        assert_eq!((g.e(), g.coclass()), (5, 4));
        assert!(matches!(
            validate_low(6, 8, 2, 0, 0, 0, 0),
            Err(PresentationError::ExponentOutOfRange { name: "alpha", .. })
        ));
    }

    #[test]
    fn names() {
        let s16 = validate_max(2, 4, 0, &[], 1, 0).unwrap();
        assert_eq!(family_name_max(&s16), "S(16) = G_0^(4)(1,0)");
        assert_eq!(family_name_max(&MaxClassPresentation::abelian(3).unwrap()), "C(3) x C(3)");
        let low = validate_low(4, 5, 1, 1, -1, 1, 0).unwrap();
        assert_eq!(family_name_low(&low), "G_0^(4,5)(1,1,-1,1)");
        let k2 = validate_max(5, 7, 2, &[1, 3], 0, 0).unwrap();
        assert_eq!(family_name_max(&k2), "G_(1,3)^(7)(0,0)");
    }

    #[test]
    fn json_wire_format() {
        let q = Presentation::from_json(r#"{"kind":"max","p":2,"m":5,"w":0,"z":1}"#).unwrap();
        assert_eq!(q.family_name(), "Q(32) = G_0^(5)(0,1)");
        let ab = Presentation::from_json(r#"{"kind":"max","p":3,"m":2}"#).unwrap();
        assert_eq!(ab.family_name(), "C(3) x C(3)");
        let low = Presentation::from_json(
            r#"{"kind":"low","m":6,"n":8,"alpha":1,"beta":0,"gamma":0,"delta":0,"rho":0}"#,
        )
        .unwrap();
        assert_eq!(low.to_json(), r#"{"kind":"low","m":6,"n":8,"alpha":1,"beta":0,"gamma":0,"delta":0,"rho":0}"#);
        assert!(matches!(
            Presentation::from_json(r#"{"kind":"low","m":6,"n":8}"#),
            Err(JsonPresentationError::Syntax(_))
        ));
        assert!(matches!(
            Presentation::from_json(r#"{"kind":"max","p":2,"m":3,"alpha":1}"#),
            Err(JsonPresentationError::Syntax(_))
        ));
        assert!(matches!(
            Presentation::from_json(r#"{"kind":"max","p":6,"m":3}"#),
            Err(JsonPresentationError::Invalid(PresentationError::PrimeRequired(6)))
        ));
    }

    proptest! {
        #[test]
        fn validate_max_total_and_stable(p in 0i64..12, m in -1i64..12, k in -1i64..4,
                                         a in proptest::collection::vec(-1i64..6, 0..4),
                                         w in -1i64..6, z in -1i64..6) {
            if let Ok(g) = validate_max(p, m, k, &a, w, z) {
                let a2: Vec<i64> = g.a().iter().map(|&v| v as i64).collect();
                let again = validate_max(g.p() as i64, g.m() as i64, g.k() as i64, &a2, g.w() as i64, g.z() as i64);
                prop_assert_eq!(again.as_ref(), Ok(&g));
                let pres = Presentation::Max(g.clone());
                prop_assert_eq!(Presentation::from_json(&pres.to_json()).unwrap(), pres);
                if g.p() == 2 {
                    prop_assert!(g.is_abelian() != g.two_family().is_some());
                }
            }
        }

        #[test]
        fn validate_low_total_and_stable(m in 0i64..14, n in 0i64..24, ex in proptest::array::uniform5(-2i64..3)) {
            if let Ok(g) = validate_low(m, n, ex[0], ex[1], ex[2], ex[3], ex[4]) {
                prop_assert_eq!(g.e(), g.n() - g.m() + 2);
                prop_assert_eq!(g.coclass(), g.n() - g.m() + 1);
                prop_assert_eq!(g.class(), g.m() - 1);
                prop_assert_eq!(g.e(), g.coclass() + 1);
                prop_assert!(g.e() >= 3 && g.e() <= g.m() - 1);
                let pres = Presentation::Low(g);
                prop_assert_eq!(Presentation::from_json(&pres.to_json()).unwrap(), pres);
            }
        }
    }
}
