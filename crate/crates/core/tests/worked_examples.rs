//! Small hand-checked instances across modules.

use padic_ergodic::builder::{build_ergodic, family_from_json, Blueprint, LevelBlueprint};
use padic_ergodic::criteria::{
    check_ergodic_additive, check_ergodic_cyclic_subgroup, check_ergodic_general, check_ergodic_gform,
    check_ergodic_perdigit_affine, check_measure_preserving_coords, check_measure_preserving_vdp,
    leman_sufficient, LemanOutcome, Witness,
};
use padic_ergodic::func::{
    chi, coordinate_fn, is_compatible_up_to, subfunction_perm, vdp_coefficients, Compatibility, Subfunction,
};
use padic_ergodic::oracle::{is_single_cycle_mod, orbit_of_zero};
use padic_ergodic::{CompatibleFn, PadicInt, Perm, Prime, Residue, TableFn};
use serde_json::json;

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn f(src: &str, depth: u32) -> CompatibleFn {
    CompatibleFn::parse(p3(), depth, src).unwrap()
}

fn residue(x: u64, level: u32) -> Residue {
    Residue::new(x, level, p3()).unwrap()
}

fn int(n: i128) -> PadicInt {
    PadicInt::from_integer(n, p3(), 6).unwrap()
}

fn oracle_ergodic(g: &CompatibleFn, depth: u32) -> bool {
    (1..=depth + 1).all(|n| is_single_cycle_mod(g, n).unwrap().single_cycle)
}

#[test]
fn coordinates_of_the_shift() {
    let shift = f("x+1", 2);
    assert_eq!(coordinate_fn(&shift, 0, &residue(2, 1)).unwrap(), 0);
    // f(2) = 3: digit 1 is the carry
    assert_eq!(coordinate_fn(&shift, 1, &residue(2, 2)).unwrap(), 1);
    let id = subfunction_perm(&shift, 1, 0).unwrap().into_perm().unwrap();
    assert!(id.is_identity());
    let carry = subfunction_perm(&shift, 1, 2).unwrap().into_perm().unwrap();
    assert_eq!(carry, Perm::shift(3, 1));
}

#[test]
fn multiplication_by_p_collapses_level_zero() {
    let g = f("3x", 2);
    assert!(matches!(subfunction_perm(&g, 0, 0).unwrap(), Subfunction::NotBijective { k: 0, .. }));
    let v = check_measure_preserving_coords(&g, 2).unwrap();
    assert!(!v.holds_at(0));
}

#[test]
fn digit_shift_is_not_compatible() {
    let q = p3().pow(3).unwrap();
    let verdict = is_compatible_up_to(p3(), 2, |x| (x % q) / 3).unwrap();
    assert!(matches!(verdict, Compatibility::CounterExample { k: 1, .. }));
}

#[test]
fn characteristic_functions() {
    assert!(chi(0, &residue(9, 3)).unwrap());
    assert!(!chi(0, &residue(10, 3)).unwrap());
    assert!(chi(5, &residue(14, 3)).unwrap());
    assert!(chi(7, &residue(7, 2)).unwrap());
}

#[test]
fn van_der_put_coefficients_by_hand() {
    let id = vdp_coefficients(&f("x", 2), 3).unwrap();
    assert_eq!(id.big_values()[5], 3);
    assert_eq!(id.small(5).mod_p(), 1);
    let sq = vdp_coefficients(&f("x^2", 2), 3).unwrap();
    assert_eq!(sq.big_values()[5], 21);
    assert_eq!(sq.small(5).reduce(2).unwrap().value(), 7);
    let constant = vdp_coefficients(&f("7", 2), 3).unwrap();
    // the first p characteristic functions partition Z_p, so each carries f(m)
    assert_eq!(constant.big_values()[..3], [7, 7, 7]);
    assert!(constant.big_values()[3..].iter().all(|&b| b == 0));
}

#[test]
fn squaring_collides_in_coefficients() {
    let v = check_measure_preserving_vdp(&f("x^2", 2), 2).unwrap();
    let first = v.first_failure().unwrap();
    assert_eq!(first.k, 0);
    assert_eq!(first.witness, Some(Witness::VdpCollision { first: 1, second: 2, residue: 1 }));
}

#[test]
fn orbit_of_an_affine_map() {
    assert_eq!(orbit_of_zero(&f("1+2x", 1), 2).unwrap(), vec![0, 1, 3, 7, 6, 4]);
}

#[test]
fn shift_sum_at_level_two() {
    let v = check_ergodic_additive(&f("x+1", 2), 2).unwrap();
    assert!(v.holds());
    let k2 = v.sums.iter().find(|s| s.k == 2).unwrap();
    assert_eq!(k2.lhs, 1);
}

/// `g = h(x+1) - h(x) + (c + x_0) div p` with `φ_0 = x_0 + c` assembles to
/// `c + x + p(h(x+1) - h(x))`.
#[test]
fn difference_form_needs_the_carry() {
    let depth = 3;
    let q = p3().pow(depth + 1).unwrap();
    for (c, h) in [(1u64, "x^2"), (2, "x^3 + x"), (1, "5x^2 + 2")] {
        let hf = f(h, depth + 1);
        let phi0 = Perm::shift(3, c);
        let diff = |x: u64| (hf.value(x + 1) % q + q - hf.value(x) % q) % q;
        let with_carry = TableFn::from_fn(p3(), depth, |x| (diff(x) + (c + x % 3) / 3) % q).unwrap();
        let g = CompatibleFn::from_table(with_carry);
        assert!(check_ergodic_gform(&phi0, &g, depth).unwrap().holds(), "c={c} h={h}");
        let direct = f(&format!("{c} + x + 3 diff({h})"), depth);
        assert!(oracle_ergodic(&direct, depth));

        let bare = CompatibleFn::from_table(TableFn::from_fn(p3(), depth, diff).unwrap());
        let v = check_ergodic_gform(&phi0, &bare, depth).unwrap();
        assert!(!v.holds_at(1), "c={c} h={h}");
    }
}

#[test]
fn constant_g_never_passes() {
    for c in 0..9 {
        let g = f(&c.to_string(), 3);
        let v = check_ergodic_gform(&Perm::shift(3, 1), &g, 3).unwrap();
        assert!(!v.holds_at(1), "g = {c}");
        let assembled = padic_ergodic::criteria::assemble_gform(&Perm::shift(3, 1), &g, 3).unwrap();
        assert!(!is_single_cycle_mod(&assembled, 2).unwrap().single_cycle);
    }
}

#[test]
fn cyclic_exponent_sums() {
    let shift = Perm::shift(3, 1);
    let gks = vec![shift.clone(); 3];
    assert_eq!(
        check_ergodic_cyclic_subgroup(&shift, &gks, |_, _| 1, 3).unwrap().statuses(),
        vec![true, false, false, false]
    );
    let fam = family_from_json(
        "cyclic",
        json!({
            "phi0": [1, 2, 0],
            "generators": [[1, 2, 0], [1, 2, 0], [1, 2, 0]],
            "exponents": [
                (0..3).map(|x| u64::from(x == 0)).collect::<Vec<_>>(),
                (0..9).map(|x| u64::from(x == 0)).collect::<Vec<_>>(),
                (0..27).map(|x| u64::from(x == 0)).collect::<Vec<_>>(),
            ],
        }),
    )
    .unwrap();
    let g = fam.build(p3(), 3).unwrap();
    assert!(check_ergodic_cyclic_subgroup(&shift, &gks, |_, x| u64::from(x == 0), 3).unwrap().holds());
    assert!(oracle_ergodic(&g, 3));
}

#[test]
fn affine_with_a_lifted_coefficient() {
    let a = [int(1), int(4), int(1)];
    assert!(check_ergodic_perdigit_affine(&int(1), &a, 4).unwrap().holds());
    let g = f("affine(1,[1,4,1])", 4);
    assert!(oracle_ergodic(&g, 4));
    assert_eq!(check_ergodic_general(&g, 4).unwrap().statuses(), vec![true; 5]);
}

#[test]
fn linear_plus_difference_examples() {
    let h = f("x^2", 4);
    assert_eq!(leman_sufficient(&int(1), None, &h), LemanOutcome::Certified);
    assert!(oracle_ergodic(&f("1 + x + 3 diff(x^2)", 4), 4));
    assert_eq!(leman_sufficient(&int(2), Some(&int(4)), &h), LemanOutcome::Certified);
    assert!(oracle_ergodic(&f("2 + 4x + 3 diff(x^2)", 4), 4));
    assert!(matches!(leman_sufficient(&int(0), None, &h), LemanOutcome::NotApplicable { .. }));
}

#[test]
fn builder_with_identity_side_tables() {
    let target = Perm::new(vec![2, 0, 1]).unwrap();
    let bp = Blueprint {
        p: p3(),
        phi0: Perm::shift(3, 1),
        levels: vec![LevelBlueprint { side: vec![Perm::identity(3); 3], target: target.clone() }],
    };
    let t = build_ergodic(&bp).unwrap();
    assert_eq!(t.subfunction_images(1, 0), target.images());
    assert!(oracle_ergodic(&CompatibleFn::from_table(t), 1));
}

#[test]
fn documents_round_trip() {
    let docs = [
        json!({"p": 3, "depth": 2, "repr": "expr", "expr": "x^2 + x + 1"}),
        json!({"p": 3, "depth": 0, "repr": "table", "tables": [[1, 2, 0]]}),
        json!({"p": 3, "depth": 0, "repr": "vdp", "coeffs": [1, 2, 0]}),
        json!({"p": 5, "depth": 1, "repr": "expr", "expr": "affine(2,[1,6])", "meta": {"id": "a"}}),
    ];
    for doc in docs {
        let g = CompatibleFn::from_json(&doc.to_string()).unwrap();
        let again = CompatibleFn::from_json(&g.to_json()).unwrap();
        let q = g.modulus();
        assert!((0..q).all(|x| g.value(x) == again.value(x)), "{doc}");
    }
    let lying = json!({"p": 3, "depth": 2, "repr": "table", "tables": [[1, 2, 0]]});
    assert!(CompatibleFn::from_json(&lying.to_string()).is_err());
}
