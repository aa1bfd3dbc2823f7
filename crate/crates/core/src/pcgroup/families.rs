use super::{PcError, PcGroup, PcPresentation, Subgroup, ORDER_CAP};
use crate::presentations::{MaxClassPresentation, TwoFamily};

/// Largest nilpotency index for which 2-groups are built.
pub const ORACLE_TWO_GROUP_MAX_M: u32 = 10;

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Builds the group named by a presentation of maximal class.
///
/// Odd p is supported for `k = 0` and order at most [`ORDER_CAP`];
/// 2-groups are built as dihedral, generalised quaternion or semidihedral
/// groups for `m <= 10`.
pub fn build_max_class_group(pres: &MaxClassPresentation) -> Result<PcGroup, PcError> {
    let (p, m) = (pres.p(), pres.m());
    if pres.is_abelian() {
        return build_odd(pres);
    }
    if p == 2 {
        if m > ORACLE_TWO_GROUP_MAX_M {
            return Err(PcError::OutOfOracleScope(format!(
                "2-groups are built for m <= {ORACLE_TWO_GROUP_MAX_M}, got m = {m}"
            )));
        }
        let family = pres.two_family().expect("validated 2-group carries a family");
        return build_two(family, m, &crate::presentations::family_name_max(pres));
    }
    if pres.k() != 0 {
        return Err(PcError::OutOfOracleScope(format!(
            "k = {} for odd p: the relations [s_j, y] with j >= 3 are not available",
            pres.k()
        )));
    }
    if pres.order() > ORDER_CAP as u128 {
        return Err(PcError::OutOfOracleScope(format!(
            "order {}^{} exceeds the cap of {ORDER_CAP} elements",
            p, m
        )));
    }
    build_odd(pres)
}

/// Generators `x, y, s_2, ..., s_{m-1}` at indices `0, 1, 2, ..., m-1`.
fn build_odd(pres: &MaxClassPresentation) -> Result<PcGroup, PcError> {
    let (p, m) = (pres.p(), pres.m() as usize);
    if pres.order() > ORDER_CAP as u128 {
        return Err(PcError::OrderTooLarge(pres.order()));
    }
    let n = m;
    let unit = |k: usize| {
        let mut v = vec![0u32; n];
        v[k] = 1;
        v
    };
    let mut pc = PcPresentation::trivial(vec![p; n]);
    // s_j^p = prod_{l=2}^{p} s_{j+l-1}^{-C(p,l)}, built from the bottom so each
    // right-hand side only uses relations already in place
    let s_tail_product = |pc: &PcPresentation, first: usize| {
        let mut acc = vec![0u32; n];
        for l in 2..=p {
            let idx = first + l as usize - 1;
            if idx < n {
                let term = pc.power(&unit(idx), -(binomial(p, l) as i128));
                acc = pc.multiply(&acc, &term);
            }
        }
        acc
    };
    for j in (2..n).rev() {
        let rhs = s_tail_product(&pc, j);
        pc.set_power(j, rhs);
    }
    let top = |e: u32| {
        let mut v = vec![0u32; n];
        if m >= 3 {
            v[m - 1] = e;
        }
        v
    };
    // y^p = s_{m-1}^{w} prod_{l=2}^{p} s_l^{-C(p,l)}; the product starts at s_2 = s_{1+l-1}
    let y_rhs = pc.multiply(&top(pres.y_power_exponent()), &s_tail_product(&pc, 1));
    pc.set_power(1, y_rhs);
    pc.set_power(0, top(pres.x_power_exponent()));
    if m >= 3 {
        pc.set_conjugate(1, 0, {
            let mut v = unit(1);
            v[2] = 1;
            v
        });
        for j in 2..n {
            let mut v = unit(j);
            if j + 1 < n {
                v[j + 1] = 1;
            }
            pc.set_conjugate(j, 0, v);
        }
    }
    PcGroup::new(p, pc, unit(0), unit(1), crate::presentations::family_name_max(pres))
}

/// Generators `x, t_1, ..., t_{m-1}` with `t_i = y^{2^{i-1}}`.
fn build_two(family: TwoFamily, m: u32, label: &str) -> Result<PcGroup, PcError> {
    let n = m as usize;
    let y_order = 1u64 << (m - 1);
    let y_power = |e: u64| {
        let e = e % y_order;
        let mut v = vec![0u32; n];
        for b in 0..(m - 1) as usize {
            v[b + 1] = (e >> b & 1) as u32;
        }
        v
    };
    let mut pc = PcPresentation::trivial(vec![2; n]);
    for i in 1..n {
        pc.set_power(i, y_power(1 << i));
    }
    let action = match family {
        TwoFamily::Dihedral | TwoFamily::Quaternion => y_order - 1,
        TwoFamily::Semidihedral => y_order / 2 - 1,
    };
    for i in 1..n {
        pc.set_conjugate(i, 0, y_power(action << (i - 1)));
    }
    let x_square = match family {
        TwoFamily::Quaternion => y_power(y_order / 2),
        _ => vec![0; n],
    };
    pc.set_power(0, x_square);
    let mut x = vec![0; n];
    x[0] = 1;
    PcGroup::new(2, pc, x, y_power(1), label)
}

/// The main commutator `s_2 = [y, x]` and `s_j = [s_{j-1}, x]`.
pub fn main_commutator(g: &PcGroup, j: u32) -> super::PcElement {
    assert!(j >= 2);
    let mut s = g.comm(g.y(), g.x());
    for _ in 2..j {
        s = g.comm(&s, g.x());
    }
    s
}

/// `M_1 = <y, gamma_2>` and `M_i = <x y^{i-2}, gamma_2>` for `2 <= i <= p+1`.
pub fn maximal_subgroups(g: &PcGroup) -> Vec<Subgroup> {
    let gamma2 = g.derived_subgroup(&g.whole());
    let p = g.p() as i64;
    let mut generators = vec![g.y().clone()];
    for i in 2..=p + 1 {
        generators.push(g.mul(g.x(), &g.pow(g.y(), i - 2)));
    }
    generators
        .into_iter()
        .map(|h| {
            let mut gens = vec![h];
            gens.extend(gamma2.generators().iter().cloned());
            g.subgroup(gens)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::validate_max;

    fn odd(p: i64, m: i64, w: i64, z: i64) -> PcGroup {
        build_max_class_group(&validate_max(p, m, 0, &[], w, z).unwrap()).unwrap()
    }

    fn two(f: TwoFamily, m: u32) -> PcGroup {
        build_max_class_group(&MaxClassPresentation::two_group(f, m).unwrap()).unwrap()
    }

    fn orders(series: &[Subgroup]) -> Vec<usize> {
        series.iter().map(Subgroup::order).collect()
    }

    #[test]
    fn binomial_identity() {
        for s in 0..=12u32 {
            for n in 0..=12u32 {
                let lhs: u128 = (0..=n).map(|l| binomial(s + l, s)).sum();
                assert_eq!(lhs, binomial(s + n + 1, s + 1), "s={s} n={n}");
            }
        }
    }

    #[test]
    fn abelian_case() {
        let g = odd(3, 2, 0, 0);
        assert_eq!(g.order(), 9);
        assert!(g.elements().all(|a| g.pow(&a, 3).is_identity()));
        assert_eq!(orders(&g.lower_central_series()), vec![9, 1]);
        let maxes = maximal_subgroups(&g);
        assert_eq!(maxes.len(), 4);
        assert!(maxes.iter().all(|h| h.order() == 3));
        for (a, b) in maxes.iter().zip(maxes.iter().skip(1)) {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn order_81_series() {
        let g = odd(3, 4, 0, 1);
        assert_eq!(g.order(), 81);
        assert_eq!(orders(&g.lower_central_series()), vec![81, 9, 3, 1]);
        let maxes = maximal_subgroups(&g);
        assert_eq!(maxes.len(), 4);
        assert!(maxes.iter().all(|h| h.order() == 27));
    }

    #[test]
    fn dihedral_eight() {
        let g = two(TwoFamily::Dihedral, 3);
        assert_eq!(orders(&g.lower_central_series()), vec![8, 2, 1]);
        let maxes = maximal_subgroups(&g);
        assert_eq!(maxes.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![4, 4, 4]);
        assert_eq!(maxes[0], g.subgroup(vec![g.y().clone()]));
        let s2 = main_commutator(&g, 2);
        assert_eq!(maxes[1], g.subgroup(vec![g.x().clone(), s2.clone()]));
        assert_eq!(maxes[2], g.subgroup(vec![g.mul(g.x(), g.y()), s2]));
    }

    #[test]
    fn derived_subgroups_of_maximal_subgroups() {
        for g in [odd(3, 5, 1, 0), odd(5, 4, 0, 0), odd(3, 4, 2, 2)] {
            let maxes = maximal_subgroups(&g);
            assert_eq!(g.derived_subgroup(&maxes[0]).order(), 1);
            let gamma3 = &g.lower_central_series()[2];
            for h in &maxes[1..] {
                assert_eq!(&g.derived_subgroup(h), gamma3);
            }
        }
        let d16 = two(TwoFamily::Dihedral, 4);
        let gamma3 = d16.lower_central_series()[2].clone();
        assert_eq!(gamma3.order(), 2);
        assert_eq!(d16.derived_subgroup(&maximal_subgroups(&d16)[1]), gamma3);
        let q8 = two(TwoFamily::Quaternion, 3);
        assert_eq!(q8.derived_subgroup(&maximal_subgroups(&q8)[2]).order(), 1);
    }

    #[test]
    fn cyclic_further_factors() {
        let mut groups = Vec::new();
        for p in [3i64, 5, 7] {
            for m in 3..=6 {
                if (p as u128).pow(m as u32) > ORDER_CAP as u128 {
                    continue;
                }
                for (w, z) in [(0, 0), (0, 1), (1, 0), (2, 1)] {
                    groups.push(odd(p, m, w, z));
                }
            }
        }
        for f in [TwoFamily::Dihedral, TwoFamily::Quaternion, TwoFamily::Semidihedral] {
            for m in f.min_index()..=8 {
                groups.push(two(f, m));
            }
        }
        for g in groups {
            let o = orders(&g.lower_central_series());
            let p = g.p() as usize;
            assert_eq!(o[0] / o[1], p * p, "{}", g.label());
            for w in o[1..].windows(2) {
                assert_eq!(w[0] / w[1], p, "{}", g.label());
            }
        }
    }

    #[test]
    fn out_of_scope() {
        let k1 = validate_max(5, 6, 1, &[1], 0, 0).unwrap();
        assert!(matches!(build_max_class_group(&k1), Err(PcError::OutOfOracleScope(_))));
        let big = validate_max(5, 8, 0, &[], 0, 0).unwrap();
        assert!(matches!(build_max_class_group(&big), Err(PcError::OutOfOracleScope(_))));
        let d = MaxClassPresentation::two_group(TwoFamily::Dihedral, 11).unwrap();
        assert!(matches!(build_max_class_group(&d), Err(PcError::OutOfOracleScope(_))));
    }

    #[test]
    fn trace_expansion_for_three_groups() {
        // u^{1+h+h^2} = u^3 [u,h]^3 [[u,h],h] modulo gamma_2(N) for N normal of index 3
        let mut groups = vec![odd(3, 2, 0, 0)];
        for m in 3..=6 {
            for w in 0..3 {
                for z in 0..3 {
                    groups.push(odd(3, m, w, z));
                }
            }
        }
        for g in groups {
            for n in maximal_subgroups(&g) {
                let dn = g.derived_subgroup(&n);
                let h = g.elements().find(|a| !n.contains(a)).unwrap();
                for idx in n.indices() {
                    let u = g.element_at(idx);
                    let lhs = g.trace_power(&u, &h, 3);
                    let c = g.comm(&u, &h);
                    let rhs = g.mul(&g.mul(&g.pow(&u, 3), &g.pow(&c, 3)), &g.comm(&c, &h));
                    assert!(dn.contains(&g.mul(&g.inv(&rhs), &lhs)), "{}", g.label());
                }
            }
        }
    }
}
