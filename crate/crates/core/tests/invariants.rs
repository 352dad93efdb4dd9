use liedeform_core::actions::{Action, BallAction, CoverElement};
use liedeform_core::catalog::standard_catalog;
use liedeform_core::contractions::{
    bump_group_deformation, group_contraction_st, group_contraction_unipotent, st_contraction,
    st_deformation, GroupTag, TransitionProfile,
};
use liedeform_core::derivations::is_derivation;
use liedeform_core::rational::{rat, ratio, to_f64};
use liedeform_core::sampling::{random_sl2, random_st, random_unipotent, sample_rng};
use liedeform_core::vector_fields::{vf_bracket, Poly, PolyVectorField};
use liedeform_core::{
    catalog, derivation_algebra, format_rational, min_effective_action_dim, parse_rational,
    CatalogName, LieAlgebra, RatMatrix, Rational, Subspace,
};
use nalgebra::{DMatrix, DVector, Matrix2};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn small_catalog() -> Vec<CatalogName> {
    standard_catalog()
        .into_iter()
        .filter(|c| catalog(c).unwrap().dim() <= 10)
        .collect()
}

fn any_algebra() -> impl Strategy<Value = LieAlgebra> {
    prop::sample::select(small_catalog()).prop_map(|c| catalog(&c).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=3), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| ratio(a, b)).collect())
}

/// An algebra with three elements of it.
fn algebra_and_triple() -> impl Strategy<Value = (LieAlgebra, [Vec<Rational>; 3])> {
    any_algebra().prop_flat_map(|g| {
        let n = g.dim();
        (Just(g), vector(n), vector(n), vector(n)).prop_map(|(g, x, y, z)| (g, [x, y, z]))
    })
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

proptest! {
    #[test]
    fn rationals_round_trip_in_lowest_terms(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = ratio(p, q);
        prop_assert!(r.denom().is_positive());
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        let (num, den) = s.split_once('/').unwrap();
        let (num, den): (i64, i64) = (num.parse().unwrap(), den.parse().unwrap());
        prop_assert_eq!(num_integer::gcd(num.abs(), den), 1);
        // Reduction is exact: p/q = num/den.
        prop_assert_eq!(p as i128 * den as i128, num as i128 * q as i128);
    }

    #[test]
    fn matrix_entry_count_is_checked(rows in 0usize..5, cols in 0usize..5, extra in 1usize..3) {
        let ok = RatMatrix::from_entries(rows, cols, vec![rat(1); rows * cols]);
        prop_assert!(ok.is_ok());
        prop_assert_eq!(ok.unwrap().entries().len(), rows * cols);
        prop_assert!(RatMatrix::from_entries(rows, cols, vec![rat(1); rows * cols + extra]).is_err());
    }

    #[test]
    fn subspace_form_is_canonical(
        vs in prop::collection::vec(vector(5), 0..6),
        mix in prop::collection::vec(-3i64..=3, 6),
    ) {
        let s = Subspace::span(5, vs.clone()).unwrap();
        prop_assert!(s.dim() <= 5 && s.dim() <= vs.len());
        prop_assert_eq!(s.basis().rank(), s.dim());
        for v in &vs {
            prop_assert!(s.contains(v).unwrap());
        }
        // Another spanning set of the same space gives the same basis.
        let mut other: Vec<Vec<Rational>> = vs.iter().rev().cloned().collect();
        if !vs.is_empty() {
            let combo = vs.iter().zip(&mix).fold(vec![rat(0); 5], |acc, (v, &c)| {
                acc.iter().zip(v).map(|(a, x)| a + x * rat(c)).collect()
            });
            other.push(combo);
            other.push(vec![rat(0); 5]);
        }
        prop_assert_eq!(Subspace::span(5, other).unwrap(), s);
    }

    #[test]
    fn structure_constants_are_antisymmetric(g in any_algebra()) {
        let n = g.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    prop_assert_eq!(
                        g.structure_constant(i, j, k),
                        -g.structure_constant(j, i, k)
                    );
                }
            }
        }
        prop_assert!(g.jacobi_check().is_empty());
    }

    #[test]
    fn bracket_is_bilinear_antisymmetric_and_jacobi((g, [x, y, z]) in algebra_and_triple()) {
        let xy = g.bracket(&x, &y).unwrap();
        let yx = g.bracket(&y, &x).unwrap();
        prop_assert!(is_zero(&add(&xy, &yx)));
        let lhs = g.bracket(&add(&x, &z), &y).unwrap();
        prop_assert_eq!(lhs, add(&xy, &g.bracket(&z, &y).unwrap()));
        let j1 = g.bracket(&x, &g.bracket(&y, &z).unwrap()).unwrap();
        let j2 = g.bracket(&y, &g.bracket(&z, &x).unwrap()).unwrap();
        let j3 = g.bracket(&z, &xy).unwrap();
        prop_assert!(is_zero(&add(&add(&j1, &j2), &j3)));
    }

    #[test]
    fn series_terms_follow_their_recursion(g in any_algebra()) {
        let full = Subspace::full(g.dim());
        for s in [g.derived_series(), g.lower_central_series()] {
            prop_assert_eq!(&s.terms[0], &full);
            for w in s.terms.windows(2) {
                prop_assert!(w[0].contains_subspace(&w[1]).unwrap());
                let next = match s.kind {
                    liedeform_core::SeriesKind::Derived => g.subspace_bracket(&w[0], &w[0]),
                    liedeform_core::SeriesKind::LowerCentral => g.subspace_bracket(&full, &w[0]),
                }
                .unwrap();
                prop_assert_eq!(&next, &w[1]);
            }
            prop_assert_eq!(s.length.is_finite(), s.terms.last().unwrap().is_zero());
        }
    }

    #[test]
    fn effective_dimension_bound(g in any_algebra()) {
        let l = g.derived_length().finite();
        let expected = match l {
            None => None,
            Some(l) if g.is_nilpotent() => Some(l),
            Some(l) => Some(l.saturating_sub(1)),
        };
        prop_assert_eq!(min_effective_action_dim(&g), expected);
        if let Some(l) = l.filter(|&l| l >= 1) {
            prop_assert!(!g.derived_series().terms[l - 1].is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivations_satisfy_leibniz((g, [x, y, _]) in algebra_and_triple()) {
        let der = derivation_algebra(&g);
        prop_assert!(der.is_commutator_closed());
        for d in &der.basis {
            prop_assert!(is_derivation(&g, d));
            let lhs = d.mul_vec(&g.bracket(&x, &y).unwrap()).unwrap();
            let rhs = add(
                &g.bracket(&d.mul_vec(&x).unwrap(), &y).unwrap(),
                &g.bracket(&x, &d.mul_vec(&y).unwrap()).unwrap(),
            );
            prop_assert_eq!(lhs, rhs);
        }
        for i in 0..g.dim() {
            prop_assert!(der.contains(&g.ad_basis(i)).unwrap());
        }
    }
}

fn float_bracket(g: &LieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = g.dim();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let c = x[i] * y[j];
            if c == 0.0 {
                continue;
            }
            for k in 0..n {
                out[k] += c * to_f64(&g.structure_constant(i, j, k));
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn profile_is_a_flat_step(t in -2.0f64..3.0) {
        let p = TransitionProfile::FlatExponential;
        let s = p.eval(t);
        prop_assert!((0.0..=1.0).contains(&s));
        if t <= 0.0 {
            prop_assert_eq!(s, 1.0);
        }
        if t >= 1.0 {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn profile_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let p = TransitionProfile::FlatExponential;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(p.eval(lo) >= p.eval(hi));
    }

    #[test]
    fn algebra_deformations_are_endomorphisms(
        n in 2usize..5,
        concat in any::<bool>(),
        t in -0.5f64..1.5,
        seed in any::<u64>(),
    ) {
        let d = if concat { st_contraction(n) } else { st_deformation(n) }.unwrap();
        let g = &d.parent;
        let m = g.dim();
        let mut rng = sample_rng(seed, 0, 0);
        let x: DVector<f64> = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let y: DVector<f64> = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let th = d.eval(t);
        let lhs = &th * float_bracket(g, &x, &y);
        let rhs = float_bracket(g, &(&th * &x), &(&th * &y));
        prop_assert!((lhs - rhs).amax() <= 1e-9);
        if t <= 0.0 {
            prop_assert_eq!(&th, &DMatrix::identity(m, m));
        }
        if t >= 1.0 {
            prop_assert_eq!(&th, &d.eval(2.0));
        }
    }

    #[test]
    fn group_deformations_are_homomorphisms(
        which in 0usize..4,
        n in 2usize..5,
        t in -0.5f64..1.5,
        seed in any::<u64>(),
    ) {
        let d = match which {
            0 => group_contraction_st(n),
            1 => group_contraction_unipotent(n),
            2 => bump_group_deformation(GroupTag::StCirc, n),
            _ => bump_group_deformation(GroupTag::Unipotent, n),
        }
        .unwrap();
        let mut rng = sample_rng(seed, 0, 0);
        let (g, h) = match d.group {
            GroupTag::StCirc => (random_st(&mut rng, n), random_st(&mut rng, n)),
            GroupTag::Unipotent => (random_unipotent(&mut rng, n), random_unipotent(&mut rng, n)),
        };
        let (tg, th, tgh) = (d.apply(t, &g), d.apply(t, &h), d.apply(t, &(&g * &h)));
        prop_assert!((&tgh - &tg * &th).amax() <= 1e-9);
        prop_assert!((tg.determinant() - 1.0).abs() <= 1e-9);
        for i in 0..n {
            prop_assert!(tg[(i, i)] > 0.0);
            for j in 0..i {
                prop_assert_eq!(tg[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn ball_action_is_supported_on_the_annulus_and_invertible(
        st in any::<bool>(),
        seed in any::<u64>(),
        r in 0.0f64..1.5,
    ) {
        let tag = if st { GroupTag::StCirc } else { GroupTag::Unipotent };
        let center = DVector::from_vec(vec![0.5, -1.0, 2.0]);
        let ball = BallAction::new(bump_group_deformation(tag, 3).unwrap(), 0.25, 0.75, center, 2.0)
            .unwrap();
        let mut rng = sample_rng(seed, 0, 0);
        let g = tag.sample(&mut rng, 3);
        let dir = liedeform_core::sampling::random_unit_vector(&mut rng, 3);
        let y = &ball.center + dir * (r * ball.radius);
        let gy = ball.act(&g, &y).unwrap();
        if !(r > 0.25 && r < 0.75) {
            prop_assert_eq!(&gy, &y);
        }
        // Radii are preserved and g^-1 undoes g.
        prop_assert!(((&gy - &ball.center).norm() - (&y - &ball.center).norm()).abs() <= 1e-12);
        let back = ball.act(&g.clone().try_inverse().unwrap(), &gy).unwrap();
        prop_assert!((back - y).amax() <= 1e-9);
    }

    #[test]
    fn cover_elements_commute_with_the_deck(seed in any::<u64>(), k in -3i64..=3, th in -20.0f64..20.0) {
        let mut rng = sample_rng(seed, 0, 0);
        let a = CoverElement::from_dmatrix(&random_sl2(&mut rng), k).unwrap();
        let b = CoverElement::from_dmatrix(&random_sl2(&mut rng), 0).unwrap();
        let pi = std::f64::consts::PI;
        prop_assert!((a.apply(th + pi) - a.apply(th) - pi).abs() <= 1e-9);
        let base = CoverElement::base_lift(&a.a, 0.0);
        prop_assert!((0.0..pi).contains(&base));
        let ab = liedeform_core::actions::cover_compose(&a, &b);
        prop_assert!((ab.apply(th) - a.apply(b.apply(th))).abs() <= 1e-9);
        prop_assert!((a.inverse().apply(a.apply(th)) - th).abs() <= 1e-9);
    }
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3), -4i64..=4), 0..4).prop_map(|terms| {
        Poly::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], rat(c)))).unwrap()
    })
}

fn small_field() -> impl Strategy<Value = PolyVectorField> {
    (small_poly(), small_poly()).prop_map(|(a, b)| PolyVectorField::new(vec![a, b]).unwrap())
}

proptest! {
    #[test]
    fn polynomials_store_no_zero_terms(p in small_poly(), q in small_poly()) {
        for r in [p.add(&q).unwrap(), p.sub(&p).unwrap(), p.mul(&q).unwrap(), p.derivative(0)] {
            prop_assert!(r.terms().values().all(|c| !c.is_zero()));
        }
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn vector_field_bracket_is_a_lie_bracket(u in small_field(), v in small_field(), w in small_field()) {
        let uv = vf_bracket(&u, &v).unwrap();
        prop_assert!(uv.add(&vf_bracket(&v, &u).unwrap()).unwrap().is_zero());
        let lin = vf_bracket(&u.add(&w).unwrap(), &v).unwrap();
        prop_assert_eq!(lin, uv.add(&vf_bracket(&w, &v).unwrap()).unwrap());
        let j = vf_bracket(&u, &vf_bracket(&v, &w).unwrap())
            .unwrap()
            .add(&vf_bracket(&v, &vf_bracket(&w, &u).unwrap()).unwrap())
            .unwrap()
            .add(&vf_bracket(&w, &uv).unwrap())
            .unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn seeded_streams_are_reproducible(seed in any::<u64>(), stream in 0u64..100, index in 0u64..1000) {
        let a = random_st(&mut sample_rng(seed, stream, index), 3);
        let b = random_st(&mut sample_rng(seed, stream, index), 3);
        prop_assert_eq!(a, b);
        let m: Matrix2<f64> = Matrix2::identity();
        prop_assert_eq!(CoverElement::new(m, 0).unwrap().apply(0.5), 0.5);
    }
}
