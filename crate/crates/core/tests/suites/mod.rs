//! Algebraic laws of the engine, checked on random and exhaustive inputs.
//! Each suite panics on the first violation.

use std::collections::BTreeSet;

use modinv_core::harness::{self, Profile, SweepPlan};
use modinv_core::invariants::{self, BracketSpec};
use modinv_core::milnor::{self, MilnorOp};
use modinv_core::padic;
use modinv_core::{Context, Degree, Element, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::common::*;

fn ctx(p: u64, n: usize) -> Context {
    Context::new(p, n).unwrap()
}

fn degree_of(a: &Element) -> u64 {
    match a.degree() {
        Degree::Homogeneous(d) => d,
        other => panic!("expected a homogeneous element, got {other:?}"),
    }
}

fn koszul(a: &Element, b: &Element) -> bool {
    degree_of(a) % 2 == 1 && degree_of(b) % 2 == 1
}

/// Strategy: `(p, n, seed)` with `p ∈ {3,5}` and `1 ≤ n ≤ 3`.
fn setting() -> impl Strategy<Value = (u64, usize, u64)> {
    (prop_oneof![Just(3u64), Just(5u64)], 1usize..=3, any::<u64>())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

// ---- ring laws ----------------------------------------------------------

proptest! {
    #![proptest_config(config(96))]
    fn graded_commutativity((p, n, seed) in setting(), ea in 0usize..3, eb in 0usize..3, da in 0u64..5, db in 0u64..5) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_homogeneous(c, &mut rng, 4, ea.min(n), da);
        let b = random_homogeneous(c, &mut rng, 4, eb.min(n), db);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        prop_assert_eq!(ab, if koszul(&a, &b) { ba.neg() } else { ba });
    }
    fn ring_axioms((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(c, &mut rng, 4, 4);
        let b = random_element(c, &mut rng, 4, 4);
        let d = random_element(c, &mut rng, 4, 4);
        prop_assert_eq!(a.mul(&b).unwrap().mul(&d).unwrap(), a.mul(&b.mul(&d).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&d).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&d).unwrap()).unwrap());
        prop_assert_eq!(a.add(&a.neg()).unwrap(), Element::zero(c));
        prop_assert_eq!(a.mul(&Element::one(c)).unwrap(), a.clone());
        prop_assert_eq!(a.scalar_mul(p), Element::zero(c));
        let fused = Element::sum_of_products(c, [(2, &a, &b), (1, &d, &b)]).unwrap();
        let plain = a.mul(&b).unwrap().scalar_mul(2).add(&d.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(fused, plain);
    }
    fn canonical_form_is_stable((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(c, &mut rng, 6, 6);
        for t in a.terms() {
            prop_assert!(t.coeff >= 1 && t.coeff < p);
        }
        for w in a.terms().windows(2) {
            prop_assert!(w[0].mono > w[1].mono);
        }
        prop_assert_eq!(Element::parse(c, &a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(Element::from_json(&a.to_json()).unwrap(), a.clone());
        let rebuilt = Element::from_terms(c, a.terms().iter().rev().map(|t| (t.coeff, t.mono))).unwrap();
        prop_assert_eq!(rebuilt, a);
    }
    fn exact_division_round_trip((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(c, &mut rng, 5, 5);
        let yd = rng.gen_range(0..4);
        let mut b = random_homogeneous(c, &mut rng, 3, 0, yd);
        if b.is_zero() {
            b = Element::one(c);
        }
        prop_assert_eq!(a.mul(&b).unwrap().exact_div(&b).unwrap(), a.clone());
        // a non-zero constant term is never divisible by a positive-degree divisor
        let y = Element::y(c, 1).unwrap();
        let yb = y.mul(&b).unwrap();
        let probe = a.mul(&yb).unwrap().add(&Element::one(c)).unwrap();
        prop_assert!(probe.exact_div(&yb).is_err());
    }
    fn frobenius_matches_repeated_squaring((p, n, seed) in setting(), e in 0u64..3) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(0..3);
        let a = random_homogeneous(c, &mut rng, 3, 0, d);
        prop_assert_eq!(a.frobenius(e).unwrap(), a.pow_by_squaring(p.pow(e as u32)).unwrap());
        let m = rng.gen_range(0..12);
        prop_assert_eq!(a.pow(m).unwrap(), a.pow_by_squaring(m).unwrap());
    }
}
fn exterior_generators_square_to_zero() {
    for p in [3, 5] {
        for n in 1..=4 {
            let c = ctx(p, n);
            for i in 1..=n {
                let x = Element::x(c, i).unwrap();
                assert!(x.mul(&x).unwrap().is_zero());
                for j in 1..=n {
                    let xj = Element::x(c, j).unwrap();
                    assert_eq!(x.mul(&xj).unwrap(), xj.mul(&x).unwrap().neg());
                }
            }
        }
    }
}
fn division_by_exterior_divisor_is_rejected() {
    let c = ctx(3, 2);
    let x = Element::x(c, 1).unwrap();
    assert!(matches!(x.exact_div(&x), Err(Error::DivisorHasExterior)));
    assert!(matches!(x.exact_div(&Element::zero(c)), Err(Error::DivisionByZero)));
}

// ---- Steenrod-Milnor action --------------------------------------------

/// Random `(S, R)` with small entries.
fn random_op(rng: &mut impl Rng) -> MilnorOp {
    let s: Vec<u32> = (0..3).filter(|_| rng.gen_bool(0.35)).collect();
    let len = rng.gen_range(0..=2);
    let r: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
    MilnorOp::new(s, r).unwrap()
}

proptest! {
    #![proptest_config(config(64))]
    fn fast_paths_agree_with_unfolded_cartan((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(c, &mut rng, 3, 20);
        let u = rng.gen_range(0..3);
        prop_assert_eq!(milnor::st_u(u, &a).unwrap(), naive_apply(c, &[u], &[], &a));
        let i = rng.gen_range(1..=3usize);
        let mut delta = vec![0; i];
        delta[i - 1] = 1;
        prop_assert_eq!(milnor::st_delta(i, &a).unwrap(), naive_apply(c, &[], &delta, &a));
        let r = rng.gen_range(0..=12);
        prop_assert_eq!(milnor::steenrod_p(r, &a).unwrap(), naive_apply(c, &[], &[r], &a));
    }
    fn generic_engine_agrees_with_unfolded_cartan((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(c, &mut rng, 3, 12);
        let op = random_op(&mut rng);
        prop_assert_eq!(milnor::apply(&op, &a).unwrap(), naive_apply(c, op.s(), op.r(), &a), "op {:?}", op);
    }
    fn result_is_independent_of_factorization((p, n, seed) in setting()) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ea = rng.gen_range(0..=n);
        let da = rng.gen_range(0..6);
        let a = random_homogeneous(c, &mut rng, 3, ea, da);
        let b = random_element(c, &mut rng, 3, 6);
        let op = random_op(&mut rng);
        let whole = milnor::apply(&op, &a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(milnor::cartan_product(&op, &a, &b).unwrap(), whole);
    }
    fn derivation_and_antiderivation_laws((p, n, seed) in setting(), ea in 0usize..3, da in 0u64..6) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_homogeneous(c, &mut rng, 3, ea.min(n), da);
        let b = random_element(c, &mut rng, 3, 6);
        let ab = a.mul(&b).unwrap();
        for i in 1..=3 {
            let lhs = milnor::st_delta(i, &ab).unwrap();
            let rhs = milnor::st_delta(i, &a).unwrap().mul(&b).unwrap()
                .add(&a.mul(&milnor::st_delta(i, &b).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        for u in 0..3 {
            let lhs = milnor::st_u(u, &ab).unwrap();
            let second = a.mul(&milnor::st_u(u, &b).unwrap()).unwrap();
            let second = if degree_of(&a) % 2 == 1 { second.neg() } else { second };
            let rhs = milnor::st_u(u, &a).unwrap().mul(&b).unwrap().add(&second).unwrap();
            prop_assert_eq!(lhs, rhs);
            // St_u is nilpotent of order two
            prop_assert!(milnor::st_u(u, &milnor::st_u(u, &b).unwrap()).unwrap().is_zero());
        }
    }
    fn operations_shift_degree_by_their_dimension((p, n, seed) in setting(), ea in 0usize..3, da in 0u64..8) {
        let c = ctx(p, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_homogeneous(c, &mut rng, 3, ea.min(n), da);
        let op = random_op(&mut rng);
        let image = milnor::apply(&op, &a).unwrap();
        if !image.is_zero() {
            prop_assert_eq!(degree_of(&image), degree_of(&a) + op.dimension_shift(p).unwrap());
        }
        // unstable: P^r kills classes of degree below 2r
        let r = (degree_of(&a) / 2) + 1 + rng.gen_range(0..3);
        prop_assert!(milnor::steenrod_p(r, &a).unwrap().is_zero());
    }
}
fn bockstein_and_identity_on_generators() {
    let c = ctx(3, 2);
    let x1 = Element::x(c, 1).unwrap();
    let x2 = Element::x(c, 2).unwrap();
    assert_eq!(milnor::st_u(0, &x1).unwrap(), Element::y(c, 1).unwrap());
    assert_eq!(milnor::apply(&MilnorOp::identity(), &x1.mul(&x2).unwrap()).unwrap(), x1.mul(&x2).unwrap());
    let expected = Element::parse(c, "x2*y1 - x1*y2").unwrap();
    assert_eq!(milnor::st_u(0, &x1.mul(&x2).unwrap()).unwrap(), expected);
    assert_eq!(naive_apply(c, &[0], &[], &x1.mul(&x2).unwrap()), expected);
}

/// Equivariance under 20 random invertible matrices per `(p, n)`.
fn action_commutes_with_linear_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            for _ in 0..20 {
                let g = random_invertible(c, &mut rng);
                let a = random_element(c, &mut rng, 3, 4);
                let op = random_op(&mut rng);
                let lhs = g.apply(&milnor::apply(&op, &a).unwrap()).unwrap();
                let rhs = milnor::apply(&op, &g.apply(&a).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "p={p} n={n} op={op:?} g={:?} a={}", g.rows(), a.to_text());
            }
        }
    }
}
fn substitution_is_a_ring_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            for _ in 0..10 {
                let g = random_invertible(c, &mut rng);
                let h = random_invertible(c, &mut rng);
                let a = random_element(c, &mut rng, 3, 3);
                let b = random_element(c, &mut rng, 3, 3);
                let ga = g.apply(&a).unwrap();
                assert_eq!(g.apply(&a.mul(&b).unwrap()).unwrap(), ga.mul(&g.apply(&b).unwrap()).unwrap());
                assert_eq!(g.apply(&h.apply(&a).unwrap()).unwrap(), g.mul(&h).unwrap().apply(&a).unwrap());
            }
        }
    }
}

// ---- invariants ---------------------------------------------------------
fn dickson_invariants_are_fixed_by_the_general_linear_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            let qs: Vec<Element> = (0..n).map(|s| invariants::dickson_q(c, n, s as i64).unwrap()).collect();
            let ln = invariants::l(c, n).unwrap();
            for _ in 0..20 {
                let g = random_invertible(c, &mut rng);
                for (s, q) in qs.iter().enumerate() {
                    assert_eq!(&g.apply(q).unwrap(), q, "p={p} n={n} s={s}");
                }
                assert_eq!(g.apply(&ln).unwrap(), ln.scalar_mul(det_of(&g)), "det scaling p={p} n={n}");
            }
        }
    }
}

fn s_lists(n: usize) -> Vec<Vec<u32>> {
    (1u32..1 << n).map(|m| (0..n as u32).filter(|&b| m >> b & 1 == 1).collect()).collect()
}
fn mui_invariants_are_fixed_by_unitriangular_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            let mut fixed: Vec<Element> = (1..=n).map(|m| invariants::mui_v(c, m).unwrap()).collect();
            for m in 1..=n {
                for s in s_lists(m) {
                    fixed.push(invariants::mui_m(c, m, &s, 1).unwrap());
                }
            }
            for _ in 0..20 {
                let g = random_unitriangular(c, &mut rng);
                for f in &fixed {
                    assert_eq!(&g.apply(f).unwrap(), f, "p={p} n={n}");
                }
            }
        }
    }
}
fn twisted_mui_invariants_are_fixed_by_sl_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            for d in 1..p {
                let ld = invariants::l(c, n).unwrap().pow(d).unwrap();
                let ms: Vec<Element> = s_lists(n).iter().map(|s| invariants::mui_m(c, n, s, d).unwrap()).collect();
                for _ in 0..20 {
                    let g = random_sl_d(c, &mut rng, d);
                    assert_eq!(g.apply(&ld).unwrap(), ld, "L^d p={p} n={n} d={d}");
                    for m in &ms {
                        assert_eq!(&g.apply(m).unwrap(), m, "M^(d) p={p} n={n} d={d}");
                    }
                }
            }
        }
    }
}
fn dickson_recursion_agrees_with_division() {
    for p in [3, 5] {
        let top = if p == 3 { 4 } else { 3 };
        for n in 1..=top {
            let c = ctx(p, n);
            let ln = invariants::l(c, n).unwrap();
            for s in 0..n {
                let q = invariants::dickson_q(c, n, s as i64).unwrap();
                let lns = invariants::ls(c, n, s).unwrap();
                assert_eq!(q.mul(&ln).unwrap(), lns, "p={p} n={n} s={s}");
                assert_eq!(lns.exact_div(&ln).unwrap(), q);
            }
        }
    }
}
fn mui_v_is_a_quotient_of_consecutive_determinants() {
    for p in [3, 5] {
        for n in 1..=3 {
            let c = ctx(p, n);
            let v = invariants::mui_v(c, n).unwrap();
            let ln = invariants::l(c, n).unwrap();
            let lprev = invariants::l(c, n - 1).unwrap();
            assert_eq!(ln.exact_div(&lprev).unwrap(), v, "p={p} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(config(48))]
    fn brackets_are_alternating_and_divisible(p in prop_oneof![Just(3u64), Just(5u64)], m in 1usize..=3, k in 0usize..3, seed in any::<u64>()) {
        let k = k.min(m);
        let c = ctx(p, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut e: Vec<u32> = (0..m - k).map(|_| rng.gen_range(0..4)).collect();
        let b = invariants::bracket(c, &BracketSpec::new(k, e.clone(), m)).unwrap();
        let distinct = e.iter().collect::<BTreeSet<_>>().len() == e.len();
        if !distinct {
            prop_assert!(b.is_zero());
        }
        if e.len() >= 2 {
            let (i, j) = (rng.gen_range(0..e.len()), rng.gen_range(0..e.len()));
            if i != j {
                e.swap(i, j);
                let swapped = invariants::bracket(c, &BracketSpec::new(k, e.clone(), m)).unwrap();
                prop_assert_eq!(swapped, b.neg());
            }
        }
        if k == 0 && distinct {
            let ln = invariants::l(c, m).unwrap();
            let q = b.exact_div(&ln).unwrap();
            prop_assert_eq!(q.mul(&ln).unwrap(), b);
        }
    }
    fn bracket_matches_leibniz_determinant(p in prop_oneof![Just(3u64), Just(5u64)], m in 1usize..=4, seed in any::<u64>()) {
        let c = ctx(p, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e: Vec<u32> = (0..m).map(|_| rng.gen_range(0..4)).collect();
        prop_assert_eq!(
            invariants::bracket(c, &BracketSpec::y_only(e.clone())).unwrap(),
            invariants::det_bracket(c, &e).unwrap()
        );
    }
}

// ---- base-p index sets --------------------------------------------------
fn index_sets_match_their_recursions() {
    for p in [3, 5] {
        for v in 1..=10u32 {
            for u in 0..v {
                let i_digits: BTreeSet<u64> = padic::index_set_i(p, u, v).unwrap().into_iter().collect();
                assert_eq!(i_digits, i_by_recursion(p, u, v), "I p={p} u={u} v={v}");
                let j_digits: BTreeSet<u64> = padic::index_set_j(p, u, v).unwrap().into_iter().collect();
                assert_eq!(j_digits, j_by_recursion(p, u, v), "J p={p} u={u} v={v}");
            }
        }
    }
}
fn small_index_set_values() {
    for p in [3u64, 5] {
        for u in 0..4 {
            assert_eq!(padic::index_set_i(p, u, u + 1).unwrap(), vec![0]);
            assert_eq!(padic::index_set_i(p, u, u + 2).unwrap(), vec![0]);
            assert_eq!(padic::index_set_j(p, u, u + 1).unwrap(), vec![0]);
            assert_eq!(padic::index_set_j(p, u, u + 2).unwrap(), vec![0]);
            // the window [u, v-2) already holds position u when v = u+3
            assert_eq!(padic::index_set_j(p, u, u + 3).unwrap(), vec![0, p.pow(u)]);
        }
    }
    assert_eq!(padic::index_set_i(3, 0, 4).unwrap(), vec![0, 1, 3]);
}

/// All ways to write `a` as blocks `p^i + p^{i+1}` (gaps at least 3) plus
/// parts with digits in the windows between them, found by trying every
/// block set.
fn count_decompositions(p: u64, u: u32, v: u32, a: u64) -> Vec<Vec<u32>> {
    let hi = v as i64 - 2;
    let positions: Vec<u32> = (u..v).filter(|&i| (i as i64) + 1 < hi).collect();
    let mut found = Vec::new();
    for mask in 0u32..1 << positions.len() {
        let blocks: Vec<u32> =
            positions.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
        if blocks.windows(2).any(|w| w[1] - w[0] < 3) {
            continue;
        }
        let pairs: u64 = blocks.iter().map(|&i| p.pow(i) + p.pow(i + 1)).sum();
        if pairs > a {
            continue;
        }
        let mut rest = a - pairs;
        let mut digits = Vec::new();
        while rest > 0 {
            digits.push(rest % p);
            rest /= p;
        }
        let mut bounds = vec![u as i64 - 3];
        bounds.extend(blocks.iter().map(|&i| i as i64));
        bounds.push(v as i64 - 1);
        let windows: Vec<(i64, i64)> = bounds.windows(2).map(|w| (w[0] + 3, w[1] + 1)).collect();
        let window_ok = |lo: i64, hi_: i64| {
            let hi_ = hi_ - 2;
            (0..digits.len() as i64).all(|i| {
                let inside = i >= lo && i < hi_;
                let d = digits[i as usize];
                if !inside {
                    return true;
                }
                let next = if i + 1 < hi_ { digits.get(i as usize + 1).copied().unwrap_or(0) } else { 0 };
                d + next <= 1
            })
        };
        let covered = digits
            .iter()
            .enumerate()
            .all(|(i, &d)| d == 0 || windows.iter().any(|&(lo, hi_)| (i as i64) >= lo && (i as i64) < hi_ - 2));
        if covered && windows.iter().all(|&(lo, hi_)| window_ok(lo, hi_)) {
            found.push(blocks);
        }
    }
    found
}
fn block_decomposition_exists_uniquely() {
    for p in [3, 5] {
        for u in 0..=2u32 {
            for v in u + 1..=u + 9 {
                for a in padic::index_set_j(p, u, v).unwrap() {
                    let dec = padic::j_decompose(p, u, v, a).unwrap();
                    assert_eq!(dec.reassemble(p), a);
                    let all = count_decompositions(p, u, v, a);
                    assert_eq!(all, vec![dec.blocks.clone()], "p={p} u={u} v={v} a={a}");
                    for (part, (lo, hi)) in dec.parts.iter().zip(dec.part_windows(u, v)) {
                        if *part != 0 {
                            assert!(lo >= 0 && padic::in_i(p, lo as u32, hi as u32, *part));
                        }
                    }
                }
            }
        }
    }
}

/// The part window `I(i_j+3, i_{j+1})` is one digit too narrow: with no
/// blocks, `a = p^{v-3}` lies in `J(u,v)` but not in `I(u, v-1)`.
fn part_windows_reach_one_past_the_next_block() {
    for p in [3u64, 5] {
        for u in 0..3u32 {
            let v = u + 4;
            let a = p.pow(v - 3);
            let dec = padic::j_decompose(p, u, v, a).unwrap();
            assert!(dec.blocks.is_empty());
            assert!(padic::in_i(p, u, v, a));
            assert!(!padic::in_i(p, u, v - 1, a));
        }
    }
}
fn exponent_functions_follow_the_transfer_rules() {
    for p in [3u64, 5] {
        for u in 0..3u32 {
            for v in u + 1..=u + 7 {
                let b = |w: u32, a: u64| padic::b_func(p, u, w, a).unwrap();
                let c = |w: u32, a: u64| padic::c_func(p, u, w, a).unwrap();
                let pv = p.pow(v);
                for a in padic::index_set_j(p, u, v + 2).unwrap() {
                    assert_eq!(b(v + 3, a), p.pow(v + 1) + b(v + 2, a));
                    assert_eq!(c(v + 3, a), c(v + 2, a));
                }
                for a in padic::index_set_j(p, u, v + 1).unwrap() {
                    assert_eq!(b(v + 3, pv + a), b(v + 1, a));
                    assert_eq!(c(v + 3, pv + a), pv + c(v + 1, a));
                }
                for a in padic::index_set_j(p, u, v).unwrap() {
                    let shift = pv + p.pow(v - 1);
                    assert_eq!(b(v + 3, shift + a), b(v, a));
                    assert_eq!(c(v + 3, shift + a), c(v, a));
                }
            }
        }
    }
}
fn exponent_b_is_never_negative() {
    for p in [3u64, 5] {
        for u in 0..3u32 {
            for v in u + 1..=u + 10 {
                for a in padic::index_set_j(p, u, v).unwrap() {
                    padic::b_func(p, u, v, a).unwrap();
                }
            }
        }
    }
}

/// Dropping `p^u` from `J(u,u+3)` breaks the three-bracket expansion, so
/// the digit definition (not the empty window) is the right one.
fn three_bracket_expansion_needs_the_lowest_digit() {
    let p = 3u64;
    let c = ctx(p, 3);
    let l3 = invariants::l(c, 3).unwrap();
    let q31 = invariants::dickson_q(c, 3, 1).unwrap();
    let q32 = invariants::dickson_q(c, 3, 2).unwrap();
    for u in 0..2u32 {
        let v = u + 3;
        let lhs = invariants::det_bracket(c, &[u, v, v + 1]).unwrap();
        let term = |a: u64| {
            let lexp = p.pow(u) + p * (p - 1) * a;
            let t = l3
                .pow(lexp)
                .unwrap()
                .mul(&q31.pow(padic::b_func(p, u, v, a).unwrap()).unwrap())
                .unwrap()
                .mul(&q32.pow(padic::c_func(p, u, v, a).unwrap()).unwrap())
                .unwrap();
            if a % 2 == 1 {
                t.neg()
            } else {
                t
            }
        };
        let full = term(0).add(&term(p.pow(u))).unwrap();
        assert_eq!(full, lhs, "u={u}");
        assert_ne!(term(0), lhs, "u={u}");
    }
}

// ---- harness ------------------------------------------------------------
fn sweeps_are_deterministic() {
    for id in ["lem2.2", "thm3.1", "prop4.3", "rem3.10", "lem4.4"] {
        let plan = SweepPlan::standard(id, 3, Profile::Quick).unwrap();
        let first = harness::sweep(&plan);
        let second = harness::sweep(&plan);
        assert!(first.same_outcome(&second), "{id}");
        assert!(first.ok(), "{first}");
    }
}
fn empty_plan_gives_empty_report() {
    let report = harness::sweep(&SweepPlan::empty("thm3.1"));
    assert_eq!((report.total, report.passed, report.failed, report.errors), (0, 0, 0, 0));
    assert!(report.ok());
}
fn hypothesis_violations_are_rejected_before_evaluation() {
    let p = harness::Params::new(3);
    assert!(matches!(
        harness::check("thm3.1", &p.clone().int("n", 2).int("s", 2).int("i", 1)),
        Err(Error::Hypothesis(_))
    ));
    assert!(matches!(harness::check("nosuch", &p), Err(Error::UnknownIdentity(_))));
    assert!(matches!(
        harness::check("thm3.1", &harness::Params::new(9).int("n", 1).int("s", 0).int("i", 1)),
        Err(Error::InvalidPrime(9))
    ));
}
fn registry_lists_every_statement_once() {
    let expected = [
        "lem2.2",
        "lem2.3",
        "thm2.4-ct5",
        "thm2.4-ct6",
        "thm3.1",
        "cor3.2",
        "prop3.3",
        "thm3.4",
        "thm3.5",
        "cor3.6",
        "thm3.7",
        "thm3.8",
        "thm3.9",
        "rem3.10",
        "prop4.1-ct7",
        "prop4.1-ct8",
        "prop4.2",
        "prop4.3",
        "lem4.4",
        "lem4.5",
        "ct9",
        "mui-expansion",
    ];
    let ids: BTreeSet<&str> = harness::IDENTITIES.iter().map(|m| m.id).collect();
    assert_eq!(ids.len(), harness::IDENTITIES.len());
    assert_eq!(ids, expected.into_iter().collect());
}

/// Every suite with a display name, in run order.
pub const SUITES: &[(&str, fn())] = &[
    ("graded commutativity", graded_commutativity),
    ("ring axioms", ring_axioms),
    ("canonical form is stable", canonical_form_is_stable),
    ("exact division round trip", exact_division_round_trip),
    ("frobenius matches repeated squaring", frobenius_matches_repeated_squaring),
    ("exterior generators square to zero", exterior_generators_square_to_zero),
    ("division by exterior divisor is rejected", division_by_exterior_divisor_is_rejected),
    ("fast paths agree with unfolded cartan", fast_paths_agree_with_unfolded_cartan),
    ("generic engine agrees with unfolded cartan", generic_engine_agrees_with_unfolded_cartan),
    ("result is independent of factorization", result_is_independent_of_factorization),
    ("derivation and antiderivation laws", derivation_and_antiderivation_laws),
    ("operations shift degree by their dimension", operations_shift_degree_by_their_dimension),
    ("bockstein and identity on generators", bockstein_and_identity_on_generators),
    ("action commutes with linear substitution", action_commutes_with_linear_substitution),
    ("substitution is a ring action", substitution_is_a_ring_action),
    (
        "dickson invariants are fixed by the general linear group",
        dickson_invariants_are_fixed_by_the_general_linear_group,
    ),
    ("mui invariants are fixed by unitriangular matrices", mui_invariants_are_fixed_by_unitriangular_matrices),
    ("twisted mui invariants are fixed by sl d", twisted_mui_invariants_are_fixed_by_sl_d),
    ("dickson recursion agrees with division", dickson_recursion_agrees_with_division),
    ("mui v is a quotient of consecutive determinants", mui_v_is_a_quotient_of_consecutive_determinants),
    ("brackets are alternating and divisible", brackets_are_alternating_and_divisible),
    ("bracket matches leibniz determinant", bracket_matches_leibniz_determinant),
    ("index sets match their recursions", index_sets_match_their_recursions),
    ("small index set values", small_index_set_values),
    ("block decomposition exists uniquely", block_decomposition_exists_uniquely),
    ("part windows reach one past the next block", part_windows_reach_one_past_the_next_block),
    ("exponent functions follow the transfer rules", exponent_functions_follow_the_transfer_rules),
    ("exponent b is never negative", exponent_b_is_never_negative),
    ("three bracket expansion needs the lowest digit", three_bracket_expansion_needs_the_lowest_digit),
    ("sweeps are deterministic", sweeps_are_deterministic),
    ("empty plan gives empty report", empty_plan_gives_empty_report),
    ("hypothesis violations are rejected before evaluation", hypothesis_violations_are_rejected_before_evaluation),
    ("registry lists every statement once", registry_lists_every_statement_once),
];
