//! Transfers `V_i: G/gamma_2(G) -> M_i/gamma_2(M_i)` to the `p + 1` maximal
//! subgroups, computed in closed form from presentation parameters and, as an
//! independent check, by definition inside an explicitly built group.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::pcgroup::{maximal_subgroups, PcElement, PcError, PcGroup, Subgroup};
use crate::presentations::{LowClassPresentation, MaxClassPresentation, Presentation};
use crate::tree::f;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("index i = {i} is out of range 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error("outside the scope of the closed formulas: {0}")]
    OutOfTheoremScope(String),
    #[error("kernel of V_{i} is not a subgroup of order p or p^2: {solutions:?}")]
    KernelNotSubgroup { i: usize, solutions: Vec<(u32, u32)> },
    #[error("kernel of V_{i} is trivial")]
    TrivialKernel { i: usize },
    #[error("solution set of V_{i} matches no kernel candidate: {solutions:?}")]
    AmbiguousKernel { i: usize, solutions: Vec<(i8, i8)> },
    #[error(transparent)]
    Pc(#[from] PcError),
}

pub type Result<T> = std::result::Result<T, TransferError>;

/// One entry `kappa(i)`: 0 for a total transfer, `j >= 1` when the kernel is
/// `M_j / gamma_2(G)`.
pub type Singulet = u32;

/// The transfer type `kappa = (kappa(1), ..., kappa(p+1))` and the number
/// `nu` of total transfers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplet {
    kappa: Vec<Singulet>,
    nu: usize,
}

impl Multiplet {
    /// Panics if some entry exceeds the length of the vector.
    pub fn new(kappa: Vec<Singulet>) -> Self {
        let len = kappa.len() as u32;
        assert!(kappa.iter().all(|&v| v <= len), "singulet out of range in {kappa:?}");
        let nu = kappa.iter().filter(|&&v| v == 0).count();
        Multiplet { kappa, nu }
    }

    pub fn kappa(&self) -> &[Singulet] {
        &self.kappa
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Degree `p + 1`.
    pub fn degree(&self) -> usize {
        self.kappa.len()
    }

    pub fn taussky(&self) -> Vec<Taussky> {
        (1..=self.degree()).map(|i| Taussky::of(self.kappa[i - 1], i)).collect()
    }

    /// Compact digit string such as `0432`.
    pub fn digits(&self) -> String {
        self.kappa.iter().map(u32::to_string).collect()
    }
}

impl fmt::Display for Multiplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.kappa.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
    }
}

impl Serialize for Multiplet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Multiplet", 3)?;
        s.serialize_field("kappa", &self.kappa)?;
        s.serialize_field("nu", &self.nu)?;
        s.serialize_field("taussky", &self.taussky())?;
        s.end()
    }
}

/// Whether the kernel of `V_i` meets `M_i` (A) or not (B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Taussky {
    A,
    B,
}

impl Taussky {
    fn of(value: Singulet, i: usize) -> Self {
        if value == 0 || value as usize == i {
            Taussky::A
        } else {
            Taussky::B
        }
    }
}

pub fn taussky_condition(kappa: &Multiplet, i: usize) -> Result<Taussky> {
    check_index(i, kappa.degree())?;
    Ok(Taussky::of(kappa.kappa[i - 1], i))
}

fn check_index(i: usize, max: usize) -> Result<()> {
    if i == 0 || i > max {
        Err(TransferError::IndexOutOfRange { i, max })
    } else {
        Ok(())
    }
}

/// An element of `M_i / gamma_2(M_i)`, stored through the lexicographically
/// smallest representative of its coset.
#[derive(Debug, Clone)]
pub struct QuotientElement {
    rep: PcElement,
    modulus: Arc<Subgroup>,
}

impl QuotientElement {
    pub fn new(group: &PcGroup, g: &PcElement, modulus: Arc<Subgroup>) -> Self {
        let rep = modulus
            .indices()
            .map(|n| group.mul(g, &group.element_at(n)))
            .min()
            .expect("subgroups contain the identity");
        QuotientElement { rep, modulus }
    }

    pub fn representative(&self) -> &PcElement {
        &self.rep
    }

    pub fn modulus(&self) -> &Subgroup {
        &self.modulus
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_identity()
    }
}

impl PartialEq for QuotientElement {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && (Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus)
    }
}

impl Eq for QuotientElement {}

/// Cached maximal subgroups and their derived subgroups for one built group.
pub struct Transfers<'g> {
    group: &'g PcGroup,
    maximal: Vec<Subgroup>,
    derived: Vec<Arc<Subgroup>>,
    outside: Vec<PcElement>,
}

impl<'g> Transfers<'g> {
    pub fn new(group: &'g PcGroup) -> Self {
        let maximal = maximal_subgroups(group);
        let derived = maximal.iter().map(|m| Arc::new(group.derived_subgroup(m))).collect();
        // x lies outside every M_i except M_2, and y lies outside M_2
        let outside = maximal
            .iter()
            .map(|m| if m.contains(group.x()) { group.y().clone() } else { group.x().clone() })
            .collect();
        Transfers { group, maximal, derived, outside }
    }

    pub fn group(&self) -> &PcGroup {
        self.group
    }

    pub fn degree(&self) -> usize {
        self.maximal.len()
    }

    pub fn maximal(&self, i: usize) -> &Subgroup {
        &self.maximal[i - 1]
    }

    pub fn derived(&self, i: usize) -> &Subgroup {
        &self.derived[i - 1]
    }

    /// `g^p` outside `M_i`, the trace power `g^{1 + h + ... + h^{p-1}}`
    /// inside, as a raw element of `M_i` (not reduced modulo `gamma_2(M_i)`).
    pub fn image_with(&self, i: usize, g: &PcElement, h: &PcElement) -> PcElement {
        let p = self.group.p();
        if self.maximal[i - 1].contains(g) {
            self.group.trace_power(g, h, p)
        } else {
            self.group.pow(g, p as i64)
        }
    }

    pub fn image_raw(&self, i: usize, g: &PcElement) -> PcElement {
        self.image_with(i, g, &self.outside[i - 1])
    }

    /// Whether two elements of `M_i` agree modulo `gamma_2(M_i)`.
    pub fn same_class(&self, i: usize, a: &PcElement, b: &PcElement) -> bool {
        self.derived[i - 1].contains(&self.group.mul(&self.group.inv(a), b))
    }

    pub fn image(&self, i: usize, g: &PcElement) -> Result<QuotientElement> {
        check_index(i, self.degree())?;
        self.group.inverse(g)?;
        Ok(QuotientElement::new(self.group, &self.image_raw(i, g), self.derived[i - 1].clone()))
    }

    /// Coset exponents `(j, l)` in `0..p` of `x^j y^l` with trivial image.
    pub fn kernel(&self, i: usize) -> Vec<(u32, u32)> {
        let p = self.group.p();
        let mut out = Vec::new();
        for j in 0..p {
            for l in 0..p {
                let g = self.coset_rep(j, l);
                if self.derived[i - 1].contains(&self.image_raw(i, &g)) {
                    out.push((j, l));
                }
            }
        }
        out
    }

    pub fn coset_rep(&self, j: u32, l: u32) -> PcElement {
        let g = self.group;
        g.mul(&g.pow(g.x(), j as i64), &g.pow(g.y(), l as i64))
    }

    pub fn multiplet(&self) -> Result<Multiplet> {
        let p = self.group.p();
        let kappa = (1..=self.degree())
            .map(|i| kernel_code(p, i, &self.kernel(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Multiplet::new(kappa))
    }
}

/// Identifies a kernel given as a set of `(j, l)` with the total kernel (0)
/// or `M_k / gamma_2(G)`; `M_1` is the line `j = 0`, `M_k` the line through
/// `(1, k - 2)`.
fn kernel_code(p: u32, i: usize, solutions: &[(u32, u32)]) -> Result<Singulet> {
    let n = solutions.len() as u32;
    if n == p * p {
        return Ok(0);
    }
    if n == 1 {
        return Err(TransferError::TrivialKernel { i });
    }
    let mut sorted = solutions.to_vec();
    sorted.sort_unstable();
    for k in 1..=p + 1 {
        let mut line: Vec<(u32, u32)> = (0..p)
            .map(|t| if k == 1 { (0, t) } else { (t, t * (k - 2) % p) })
            .collect();
        line.sort_unstable();
        if line == sorted {
            return Ok(k);
        }
    }
    Err(TransferError::KernelNotSubgroup { i, solutions: sorted })
}

/// `V_i(g)` computed from the definition in a built group.
pub fn transfer_by_definition(group: &PcGroup, i: usize, g: &PcElement) -> Result<QuotientElement> {
    check_index(i, group.p() as usize + 1)?;
    Transfers::new(group).image(i, g)
}

/// Kernels found by evaluating the transfers on all `p^2` cosets.
pub fn transfer_multiplet_by_oracle(group: &PcGroup) -> Result<Multiplet> {
    Transfers::new(group).multiplet()
}

/// Generators appearing in closed-form images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Symbol {
    /// `s_j`
    S(u32),
    /// `sigma_j`
    Sigma(u32),
    /// `tau_j`
    Tau(u32),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::S(j) => write!(f, "s_{j}"),
            Symbol::Sigma(j) => write!(f, "sigma_{j}"),
            Symbol::Tau(j) => write!(f, "tau_{j}"),
        }
    }
}

/// The subgroup an image is taken modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Modulus {
    Trivial,
    /// `gamma_j(G)`
    LowerCentral(u32),
    /// `gamma_2(M_i)`
    DerivedMaximal(usize),
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Trivial => f.write_str("1"),
            Modulus::LowerCentral(j) => write!(f, "gamma_{j}(G)"),
            Modulus::DerivedMaximal(i) => write!(f, "gamma_2(M_{i})"),
        }
    }
}

/// A formal product of generator powers modulo a named subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageDescriptor {
    pub factors: Vec<(Symbol, i64)>,
    pub modulus: Modulus,
}

impl ImageDescriptor {
    fn new(factors: Vec<(Symbol, i64)>, modulus: Modulus) -> Self {
        let factors = factors.into_iter().filter(|&(_, e)| e != 0).collect();
        ImageDescriptor { factors, modulus }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, s: Symbol) -> i64 {
        self.factors.iter().filter(|(t, _)| *t == s).map(|(_, e)| e).sum()
    }
}

impl fmt::Display for ImageDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            f.write_str("1")?;
        }
        for (n, (s, e)) in self.factors.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        write!(f, " mod {}", self.modulus)
    }
}

/// `V_i(x^j y^l gamma_2(G))` as a formal product.
///
/// For maximal class `0 <= j, l < p` and exponents are reduced into `0..p`;
/// for the 3-groups of lower class `j, l` lie in `{-1, 0, 1}` and exponents
/// are reduced into the same balanced range.
pub fn transfer_image_closed_form(pres: &Presentation, i: usize, j: i64, l: i64) -> Result<ImageDescriptor> {
    match pres {
        Presentation::Max(g) => max_image(g, i, j, l),
        Presentation::Low(g) => low_image(g, i, j, l),
    }
}

fn max_image(g: &MaxClassPresentation, i: usize, j: i64, l: i64) -> Result<ImageDescriptor> {
    let p = g.p() as i64;
    check_index(i, p as usize + 1)?;
    let (m, k) = (g.m(), g.k());
    if g.is_abelian() {
        return Ok(ImageDescriptor::new(Vec::new(), Modulus::Trivial));
    }
    let (xe, ye) = (g.x_power_exponent() as i64, g.y_power_exponent() as i64);
    let red = |e: i64| e.rem_euclid(p);
    let regular = red(xe * j + ye * l);
    let top = Symbol::S(m - 1);
    let s2 = Symbol::S(2);
    let d = if p == 2 {
        match (i, m) {
            (1, _) => ImageDescriptor::new(vec![(top, regular)], Modulus::Trivial),
            (2, 3) => ImageDescriptor::new(vec![(s2, red((xe - 1) * j + (ye - 1) * l))], Modulus::Trivial),
            (2, _) => ImageDescriptor::new(vec![(s2, red(-(j + l)))], Modulus::LowerCentral(3)),
            (_, 3) => ImageDescriptor::new(vec![(s2, red(xe * j + (ye - 1) * l))], Modulus::Trivial),
            _ => ImageDescriptor::new(vec![(s2, red(-l))], Modulus::LowerCentral(3)),
        }
    } else if i == 1 {
        if k == 0 {
            ImageDescriptor::new(vec![(top, regular)], Modulus::Trivial)
        } else {
            ImageDescriptor::new(Vec::new(), Modulus::LowerCentral(m - k))
        }
    } else if m == 3 {
        ImageDescriptor::new(vec![(s2, regular)], Modulus::Trivial)
    } else {
        ImageDescriptor::new(Vec::new(), Modulus::LowerCentral(3))
    };
    Ok(d)
}

fn balanced(e: i64) -> i64 {
    (e + 1).rem_euclid(3) - 1
}

fn low_image(g: &LowClassPresentation, i: usize, j: i64, l: i64) -> Result<ImageDescriptor> {
    check_index(i, 4)?;
    if g.rho() != 0 && g.m() < 5 {
        return Err(TransferError::OutOfTheoremScope(format!(
            "k = 1 requires m >= 5, got m = {}",
            g.m()
        )));
    }
    let [alpha, beta, gamma, delta, rho] = g.exponents().map(i64::from);
    let m = g.m();
    let e = g.e();
    let f = |v: Vec<(Symbol, i64)>| {
        // merge coinciding symbols such as sigma_{m-2} = sigma_3 when m = 5
        let mut merged: Vec<(Symbol, i64)> = Vec::new();
        for (s, x) in v {
            match merged.iter_mut().find(|(t, _)| *t == s) {
                Some(entry) => entry.1 += x,
                None => merged.push((s, x)),
            }
        }
        let merged = merged.into_iter().map(|(s, x)| (s, balanced(x))).collect();
        ImageDescriptor::new(merged, Modulus::DerivedMaximal(i))
    };
    let d = match i {
        1 => f(vec![
            (Symbol::Sigma(m - 2), rho * beta * l),
            (Symbol::Sigma(m - 1), (gamma - rho * beta) * l),
            (Symbol::Tau(e), delta * l),
            (Symbol::Tau(3), j),
        ]),
        2 => f(vec![
            (Symbol::Sigma(3), l),
            (Symbol::Sigma(m - 2), rho * delta * j),
            (Symbol::Sigma(m - 1), (alpha + rho * beta) * j),
            (Symbol::Tau(e), beta * j),
        ]),
        _ => f(vec![(Symbol::Sigma(3), l), (Symbol::Tau(3), j)]),
    };
    Ok(d)
}

/// Whether the closed-form singulet is read off a tabulated case or derived
/// from the image formula for exponents outside the tabulated list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Tabulated,
    Extrapolated,
}

/// Kernel of `j -> a j + b l (mod p)` as a singulet.
fn linear_form_kernel(p: u32, a: u32, b: u32) -> Singulet {
    let (a, b) = (a % p, b % p);
    match (a, b) {
        (0, 0) => 0,
        (_, 0) => 1,
        (0, _) => 2,
        _ => {
            // kernel spanned by (1, -a/b)
            let b_inv = (1..p).find(|t| b * t % p == 1).expect("p is prime");
            2 + (p - a) * b_inv % p
        }
    }
}

/// `kappa(i)` from the closed formulas, together with its provenance.
pub fn transfer_kernel_with_provenance(pres: &Presentation, i: usize) -> Result<(Singulet, Provenance)> {
    match pres {
        Presentation::Max(g) => max_kernel(g, i),
        Presentation::Low(g) => low_kernel(g, i).map(|v| (v, Provenance::Tabulated)),
    }
}

pub fn transfer_kernel_closed_form(pres: &Presentation, i: usize) -> Result<Singulet> {
    transfer_kernel_with_provenance(pres, i).map(|(v, _)| v)
}

fn max_kernel(g: &MaxClassPresentation, i: usize) -> Result<(Singulet, Provenance)> {
    use Provenance::*;
    let p = g.p();
    check_index(i, p as usize + 1)?;
    if g.is_abelian() {
        return Ok((0, Tabulated));
    }
    let m = g.m();
    if p == 2 {
        let family = g.two_family().expect("validated 2-group");
        use crate::presentations::TwoFamily::*;
        let v = match (i, family, m) {
            (1, Dihedral, _) => 0,
            (1, Quaternion, _) => 1,
            (1, Semidihedral, _) => 2,
            (2, Quaternion, 3) => 2,
            (2, _, _) => 3,
            (_, Quaternion, 3) => 3,
            _ => 2,
        };
        return Ok((v, Tabulated));
    }
    let (xe, ye) = (g.x_power_exponent(), g.y_power_exponent());
    if i == 1 && g.k() >= 1 {
        return Ok((0, Tabulated));
    }
    if i >= 2 && m >= 4 {
        return Ok((0, Tabulated));
    }
    let tabulated = match (xe, ye) {
        (0, 0) | (1, 0) => true,
        (0, _) => i == 1 && m >= 4,
        _ => false,
    };
    let v = linear_form_kernel(p, xe, ye);
    Ok((v, if tabulated { Tabulated } else { Extrapolated }))
}

fn low_kernel(g: &LowClassPresentation, i: usize) -> Result<Singulet> {
    check_index(i, 4)?;
    if !g.in_kernel_scope() {
        return Err(TransferError::OutOfTheoremScope(format!(
            "kernels need e >= 4 and m >= 6 or (m = 5, k = 0); got m = {}, e = {}, k = {}",
            g.m(),
            g.e(),
            g.k()
        )));
    }
    let [alpha, beta, gamma, delta, _] = g.exponents();
    Ok(match i {
        1 if g.k() == 0 => f(alpha, gamma),
        1 => f(delta, beta),
        2 => f(beta, delta),
        3 => 4,
        _ => 3,
    })
}

/// The canonical multiplet from the closed formulas.
pub fn transfer_multiplet(pres: &Presentation) -> Result<Multiplet> {
    let degree = pres.p() as usize + 1;
    let kappa = (1..=degree)
        .map(|i| transfer_kernel_closed_form(pres, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Multiplet::new(kappa))
}

/// `Extrapolated` if any singulet of the multiplet is.
pub fn multiplet_provenance(pres: &Presentation) -> Result<Provenance> {
    let degree = pres.p() as usize + 1;
    for i in 1..=degree {
        if transfer_kernel_with_provenance(pres, i)?.1 == Provenance::Extrapolated {
            return Ok(Provenance::Extrapolated);
        }
    }
    Ok(Provenance::Tabulated)
}

/// Coordinates of the F_3-module spanned by `sigma_3..sigma_{m-1}` and
/// `tau_3..tau_e`, with `tau_{e+1} = sigma_{m-1}^{-rho}`.
struct LowModule {
    m: u32,
    e: u32,
    rho: i64,
}

impl LowModule {
    fn dim(&self) -> usize {
        (self.m - 3 + self.e - 2) as usize
    }

    fn vector(&self, terms: &[(Symbol, i64)]) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        for &(s, x) in terms {
            match s {
                Symbol::Sigma(j) => v[(j - 3) as usize] += x,
                Symbol::Tau(j) if j == self.e + 1 => v[(self.m - 4) as usize] -= self.rho * x,
                Symbol::Tau(j) => v[(self.m - 3 + j - 3) as usize] += x,
                Symbol::S(_) => unreachable!("no s_j coordinates in the module"),
            }
        }
        v.iter().map(|x| x.rem_euclid(3)).collect()
    }
}

/// Row-reduces over F_3 and tests whether `target` is in the span of `gens`.
fn in_span_mod3(gens: &[Vec<i64>], target: &[i64]) -> bool {
    let rank = |rows: &mut Vec<Vec<i64>>| {
        let cols = target.len();
        let mut r = 0;
        for c in 0..cols {
            let Some(pivot) = (r..rows.len()).find(|&k| rows[k][c] % 3 != 0) else {
                continue;
            };
            rows.swap(r, pivot);
            let inv = if rows[r][c] == 1 { 1 } else { 2 };
            for x in rows[r].iter_mut() {
                *x = (*x * inv).rem_euclid(3);
            }
            for k in 0..rows.len() {
                if k != r && rows[k][c] != 0 {
                    let factor = rows[k][c];
                    let pivot_row = rows[r].clone();
                    for (x, y) in rows[k].iter_mut().zip(pivot_row) {
                        *x = (*x - factor * y).rem_euclid(3);
                    }
                }
            }
            r += 1;
        }
        r
    };
    let mut a = gens.to_vec();
    let mut b = gens.to_vec();
    b.push(target.to_vec());
    rank(&mut a) == rank(&mut b)
}

/// Independent derivation of the lower-class singulets: evaluates the image
/// formula at all `(j, l)` in `{-1,0,1}^2`, tests membership in the span of
/// the generators of `gamma_2(M_i)` and reads the kernel off the solutions.
pub fn kernel_solver_low_class(pres: &LowClassPresentation, i: usize) -> Result<Singulet> {
    check_index(i, 4)?;
    if !pres.in_kernel_scope() {
        return Err(TransferError::OutOfTheoremScope(format!(
            "kernels need e >= 4 and m >= 6 or (m = 5, k = 0); got m = {}, e = {}",
            pres.m(),
            pres.e()
        )));
    }
    let [alpha, beta, gamma, delta, rho] = pres.exponents().map(i64::from);
    let (m, e) = (pres.m(), pres.e());
    let module = LowModule { m, e, rho };
    use Symbol::{Sigma, Tau};
    let s3 = [
        (Sigma(3), -1),
        (Sigma(4), -1),
        (Sigma(m - 2), rho * beta),
        (Sigma(m - 1), gamma),
        (Tau(e), delta),
    ];
    let t3 = [
        (Tau(3), 1),
        (Tau(4), 1),
        (Sigma(m - 2), -rho * delta),
        (Sigma(m - 1), -alpha),
        (Tau(e), -beta),
    ];
    let sigmas = |from: u32| (from..m).map(|j| vec![(Sigma(j), 1)]).collect::<Vec<_>>();
    let taus = |from: u32| (from..=e + 1).map(|j| vec![(Tau(j), 1)]).collect::<Vec<_>>();
    let mut gens: Vec<Vec<(Symbol, i64)>> = match i {
        1 => {
            let mut g = vec![t3.to_vec()];
            g.extend(taus(4));
            g
        }
        2 => {
            let mut g = vec![s3.to_vec()];
            g.extend(sigmas(4));
            g
        }
        _ => {
            let sign = if i == 3 { 1 } else { -1 };
            let mut prod = s3.to_vec();
            prod.extend(t3.iter().map(|&(s, x)| (s, sign * x)));
            let mut g = vec![prod];
            g.extend(sigmas(4));
            g.extend(taus(4));
            g
        }
    };
    let gens: Vec<Vec<i64>> = gens.drain(..).map(|t| module.vector(&t)).collect();
    let mut solutions = Vec::new();
    for j in -1i8..=1 {
        for l in -1i8..=1 {
            let image = low_image(pres, i, j as i64, l as i64)?;
            if in_span_mod3(&gens, &module.vector(&image.factors)) {
                solutions.push((j, l));
            }
        }
    }
    let all = |pred: &dyn Fn(i8, i8) -> bool| {
        let expected: Vec<(i8, i8)> = (-1..=1).flat_map(|j| (-1..=1).map(move |l| (j, l))).filter(|&(j, l)| pred(j, l)).collect();
        expected == solutions
    };
    let code = if solutions.len() == 9 {
        0
    } else if all(&|j, _| j == 0) {
        1
    } else if all(&|_, l| l == 0) {
        2
    } else if all(&|j, l| j == l) {
        3
    } else if all(&|j, l| j == -l) {
        4
    } else {
        return Err(TransferError::AmbiguousKernel { i, solutions });
    };
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::build_max_class_group;
    use crate::presentations::{validate_low, validate_max, TwoFamily};
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn max(p: i64, m: i64, w: i64, z: i64) -> MaxClassPresentation {
        validate_max(p, m, 0, &[], w, z).unwrap()
    }

    fn two(f: TwoFamily, m: u32) -> MaxClassPresentation {
        MaxClassPresentation::two_group(f, m).unwrap()
    }

    fn low(m: i64, n: i64, e: [i64; 5]) -> LowClassPresentation {
        validate_low(m, n, e[0], e[1], e[2], e[3], e[4]).unwrap()
    }

    fn mult(p: Presentation) -> Vec<u32> {
        transfer_multiplet(&p).unwrap().kappa().to_vec()
    }

    #[test]
    fn definitional_examples() {
        let d8 = build_max_class_group(&two(TwoFamily::Dihedral, 3)).unwrap();
        assert!(transfer_by_definition(&d8, 1, d8.y()).unwrap().is_identity());
        let q8 = build_max_class_group(&two(TwoFamily::Quaternion, 3)).unwrap();
        let v = transfer_by_definition(&q8, 1, q8.x()).unwrap();
        let s2 = crate::pcgroup::main_commutator(&q8, 2);
        assert_eq!(v, QuotientElement::new(&q8, &s2, Arc::new(q8.trivial_subgroup())));
        let c33 = build_max_class_group(&MaxClassPresentation::abelian(3).unwrap()).unwrap();
        for i in 1..=4 {
            for g in c33.elements() {
                assert!(transfer_by_definition(&c33, i, &g).unwrap().is_identity());
            }
        }
        assert_eq!(
            transfer_by_definition(&c33, 5, c33.x()).unwrap_err(),
            TransferError::IndexOutOfRange { i: 5, max: 4 }
        );
        assert_eq!(
            transfer_by_definition(&c33, 1, d8.x()).unwrap_err(),
            TransferError::Pc(PcError::GroupMismatch)
        );
    }

    #[test]
    fn closed_form_images() {
        let g = Presentation::Max(max(5, 4, 2, 3));
        let v = transfer_image_closed_form(&g, 1, 1, 0).unwrap();
        assert_eq!(v.exponent_of(Symbol::S(3)), 3);
        assert_eq!(v.modulus, Modulus::Trivial);
        let s = Presentation::Max(two(TwoFamily::Semidihedral, 5));
        let v = transfer_image_closed_form(&s, 2, 0, 1).unwrap();
        assert_eq!(v.exponent_of(Symbol::S(2)), 1); // s_2^{-1} with s_2 of order 2 mod gamma_3
        assert_eq!(v.modulus, Modulus::LowerCentral(3));
        let l = Presentation::Low(low(6, 8, [1, -1, 0, 1, 0]));
        let v = transfer_image_closed_form(&l, 2, 1, 0).unwrap();
        assert_eq!(v.factors, vec![(Symbol::Sigma(5), 1), (Symbol::Tau(4), -1)]);
        assert_eq!(v.to_string(), "sigma_5 tau_4^-1 mod gamma_2(M_2)");
        let k1 = Presentation::Max(validate_max(5, 6, 1, &[1], 0, 0).unwrap());
        assert!(transfer_image_closed_form(&k1, 1, 1, 1).unwrap().is_trivial());
        assert!(matches!(
            transfer_image_closed_form(&Presentation::Low(low(4, 5, [0, 0, 0, 0, 1])), 1, 0, 0),
            Err(TransferError::OutOfTheoremScope(_))
        ));
    }

    #[test]
    fn closed_form_kernels() {
        assert_eq!(transfer_kernel_closed_form(&Presentation::Max(max(3, 5, 2, 0)), 1).unwrap(), 2);
        assert_eq!(transfer_kernel_closed_form(&Presentation::Max(two(TwoFamily::Semidihedral, 6)), 3).unwrap(), 2);
        assert_eq!(transfer_kernel_closed_form(&Presentation::Low(low(6, 8, [1, 0, 1, 0, 0])), 1).unwrap(), 4);
        assert_eq!(mult(Presentation::Max(two(TwoFamily::Dihedral, 7))), vec![0, 3, 2]);
        assert_eq!(mult(Presentation::Max(max(5, 3, 0, 1))), vec![1; 6]);
        assert_eq!(mult(Presentation::Max(MaxClassPresentation::abelian(7).unwrap())), vec![0; 8]);
        assert!(matches!(
            transfer_kernel_closed_form(&Presentation::Low(low(5, 7, [0, 0, 0, 0, 0])), 1),
            Ok(0)
        ));
        assert!(matches!(
            transfer_kernel_closed_form(&Presentation::Low(low(5, 6, [0, 0, 0, 0, 0])), 1),
            Err(TransferError::OutOfTheoremScope(_))
        ));
    }

    #[test]
    fn provenance_flags() {
        let tab = |w, z| multiplet_provenance(&Presentation::Max(max(5, 4, w, z))).unwrap();
        assert_eq!(tab(0, 0), Provenance::Tabulated);
        assert_eq!(tab(0, 1), Provenance::Tabulated);
        assert_eq!(tab(3, 0), Provenance::Tabulated);
        assert_eq!(tab(0, 2), Provenance::Extrapolated);
        assert_eq!(tab(1, 1), Provenance::Extrapolated);
        assert_eq!(transfer_kernel_closed_form(&Presentation::Max(max(5, 4, 0, 2)), 1).unwrap(), 1);
    }

    #[test]
    fn linear_kernel_lines() {
        // brute force over (j, l) against the closed expression
        for p in [3u32, 5, 7] {
            for a in 0..p {
                for b in 0..p {
                    let sols: Vec<(u32, u32)> = (0..p)
                        .flat_map(|j| (0..p).map(move |l| (j, l)))
                        .filter(|&(j, l)| (a * j + b * l) % p == 0)
                        .collect();
                    assert_eq!(kernel_code(p, 1, &sols).unwrap(), linear_form_kernel(p, a, b));
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let q16 = build_max_class_group(&two(TwoFamily::Quaternion, 4)).unwrap();
        let m = transfer_multiplet_by_oracle(&q16).unwrap();
        assert_eq!((m.kappa().to_vec(), m.nu()), (vec![1, 3, 2], 0));
        let d8 = build_max_class_group(&two(TwoFamily::Dihedral, 3)).unwrap();
        let m = transfer_multiplet_by_oracle(&d8).unwrap();
        assert_eq!((m.kappa().to_vec(), m.nu()), (vec![0, 3, 2], 1));
        let g = build_max_class_group(&max(3, 4, 0, 1)).unwrap();
        let m = transfer_multiplet_by_oracle(&g).unwrap();
        assert_eq!((m.kappa().to_vec(), m.nu()), (vec![1, 0, 0, 0], 3));
    }

    #[test]
    fn kernel_code_errors() {
        assert_eq!(kernel_code(3, 2, &[(0, 0)]), Err(TransferError::TrivialKernel { i: 2 }));
        assert!(matches!(
            kernel_code(3, 2, &[(0, 0), (1, 1), (1, 2)]),
            Err(TransferError::KernelNotSubgroup { .. })
        ));
    }

    #[test]
    fn solver_examples() {
        assert_eq!(kernel_solver_low_class(&low(6, 8, [0, 0, 0, 0, 0]), 2).unwrap(), 0);
        assert_eq!(kernel_solver_low_class(&low(6, 8, [0, 1, 0, 1, 0]), 2).unwrap(), 4);
        assert_eq!(kernel_solver_low_class(&low(6, 8, [1, 0, -1, 0, 0]), 1).unwrap(), 3);
    }

    #[test]
    fn taussky() {
        let m = Multiplet::new(vec![1, 2, 3]);
        assert_eq!(taussky_condition(&m, 1).unwrap(), Taussky::A);
        let d = Multiplet::new(vec![0, 3, 2]);
        assert_eq!(taussky_condition(&d, 1).unwrap(), Taussky::A);
        assert_eq!(taussky_condition(&d, 2).unwrap(), Taussky::B);
        assert_eq!(taussky_condition(&d, 4), Err(TransferError::IndexOutOfRange { i: 4, max: 3 }));
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"kappa":[0,3,2],"nu":1,"taussky":["A","B","B"]}"#
        );
    }

    fn oracle_groups() -> Vec<PcGroup> {
        let mut out = vec![];
        for (p, m) in [(3, 2), (3, 3), (3, 4), (5, 3), (2, 2)] {
            for w in 0..p.min(3) {
                for z in 0..p.min(3) {
                    if let Ok(pres) = validate_max(p, m, 0, &[], w, z) {
                        out.push(build_max_class_group(&pres).unwrap());
                    }
                }
            }
        }
        out.push(build_max_class_group(&two(TwoFamily::Semidihedral, 5)).unwrap());
        out.push(build_max_class_group(&two(TwoFamily::Quaternion, 4)).unwrap());
        out
    }

    #[test]
    fn homomorphism_sampled() {
        let mut rng = StdRng::seed_from_u64(11);
        for g in oracle_groups() {
            let t = Transfers::new(&g);
            for i in 1..=t.degree() {
                for _ in 0..100 {
                    let a = g.element_at(rng.gen_range(0..g.order()));
                    let b = g.element_at(rng.gen_range(0..g.order()));
                    let lhs = t.image_raw(i, &g.mul(&a, &b));
                    let rhs = g.mul(&t.image_raw(i, &a), &t.image_raw(i, &b));
                    assert!(t.same_class(i, &lhs, &rhs), "{} i={i}", g.label());
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closed_form_multiplet_is_well_formed(p in prop::sample::select(vec![3i64, 5, 7, 11]), m in 2i64..9, w in 0i64..11, z in 0i64..11) {
            let Ok(pres) = validate_max(p, m, 0, &[], w % p, z % p) else { return Ok(()); };
            let mult = transfer_multiplet(&Presentation::Max(pres)).unwrap();
            prop_assert_eq!(mult.degree() as i64, p + 1);
            prop_assert_eq!(mult.nu(), mult.kappa().iter().filter(|&&v| v == 0).count());
            prop_assert!(mult.kappa().iter().all(|&v| v as i64 <= p + 1));
        }

        #[test]
        fn low_closed_form_matches_solver(m in 5i64..10, extra in 0i64..8, e in prop::array::uniform5(-1i64..=1)) {
            let n = (m + 2 + extra).min(2 * m - 3);
            let Ok(g) = validate_low(m, n, e[0], e[1], e[2], e[3], e[4]) else { return Ok(()); };
            if !g.in_kernel_scope() { return Ok(()); }
            for i in 1..=4 {
                prop_assert_eq!(
                    kernel_solver_low_class(&g, i).unwrap(),
                    transfer_kernel_closed_form(&Presentation::Low(g), i).unwrap()
                );
            }
        }
    }
}
