use proptest::prelude::*;
use virfusion::exactlin::{frac, int, Rational};
use virfusion::griess::*;

thread_local! {
    static POST: &'static Built =
        Box::leak(Box::new(build_engine(Configuration::Post, &EngineOptions::default()).unwrap()));
}

fn post() -> &'static Engine {
    POST.with(|b| &b.engine)
}

fn pre() -> Built {
    build_engine(Configuration::Pre, &EngineOptions::default()).unwrap()
}

fn w(modes: &[(Gen, i64)], base: Base) -> Monomial {
    Monomial::new(modes.iter().map(|&(g, n)| Mode::new(g, n)).collect(), base)
}

fn constant(s: &SymbolicScalar) -> Rational {
    s.as_constant().unwrap_or_else(|| panic!("not a constant: {s}"))
}

#[test]
fn normal_form_examples() {
    let e = post();
    assert!(e.normalize(&w(&[(Gen::L, 1)], Base::X)).unwrap().is_zero());
    let u1x = e.normalize(&w(&[(Gen::U, 1)], Base::X)).unwrap();
    assert_eq!(u1x, State::gen(Gen::X).scale_q(&int(-10)));
    let u0x = e.normalize(&w(&[(Gen::U, 0)], Base::X)).unwrap();
    let x2 = e.normalize(&w(&[(Gen::X, -2)], Base::Vac)).unwrap();
    assert_eq!(u0x, x2.scale_q(&int(-5)));
    assert_eq!(x2, State::mono(w(&[(Gen::L, -1)], Base::X)));
}

#[test]
fn products_are_derived_not_assumed() {
    let built = pre();
    let asserted = |k: &RuleKind| matches!(k, RuleKind::Evaluation { left: Gen::U, .. });
    assert!(!built.engine.rules().has(asserted));
    let ids: Vec<&str> = built.derivations.iter().map(|d| d.rule_id.as_str()).collect();
    assert_eq!(ids, ["R6a", "R6b"]);
    assert_eq!(built.derivations[0].target.to_string(), "x_{1}u");
    assert_eq!(built.derivations[0].value, State::gen(Gen::X).scale_q(&int(-10)));

    // Without the derivation u_1x stays an opaque product.
    let raw = build_engine(Configuration::Pre, &EngineOptions { raw: true, ..Default::default() }).unwrap();
    let u1x = raw.engine.normalize(&w(&[(Gen::U, 1)], Base::X)).unwrap();
    assert_eq!(u1x, State::mono(w(&[(Gen::X, 1)], Base::U)));
}

#[test]
fn quadratic_relation_instances() {
    let raw = build_engine(Configuration::Pre, &EngineOptions { raw: true, ..Default::default() }).unwrap();
    let r3 = quadratic_instance(&raw.engine, 3, Gen::Y).unwrap();
    let mut expect = State::gen(Gen::X).scale_q(&int(10));
    expect.add_term(w(&[(Gen::X, 1)], Base::U), SymbolicScalar::one());
    assert_eq!(r3, expect);
    let r2 = quadratic_instance(&raw.engine, 2, Gen::Y).unwrap();
    let mut expect = State::mono(w(&[(Gen::L, -1)], Base::X)).scale_q(&int(10));
    expect.add_term(w(&[(Gen::X, 0)], Base::U), SymbolicScalar::int(2));
    assert_eq!(r2, expect);
}

#[test]
fn lemma54_chain_replication() {
    let raw = build_engine(Configuration::Pre, &EngineOptions { raw: true, ..Default::default() }).unwrap();
    let s = lemma54_chain(&raw.engine).unwrap();
    assert_eq!(s.to_string(), "10*x + x_{1}u");
    assert!(lemma54_chain(&pre().engine).unwrap().is_zero());
}

#[test]
fn pairing_examples() {
    let e = post();
    let g = State::gen;
    assert_eq!(constant(&e.pair(&g(Gen::X), &g(Gen::Y)).unwrap()), int(1));
    let x1y = e.normalize(&w(&[(Gen::X, 1)], Base::Y)).unwrap();
    assert_eq!(constant(&e.pair(&x1y, &x1y).unwrap()), int(-2));
    assert_eq!(constant(&e.pair(&g(Gen::U), &g(Gen::U)).unwrap()), int(-10));
    let omega = State::mono(w(&[(Gen::L, -2)], Base::Vac));
    assert_eq!(constant(&e.pair(&omega, &omega).unwrap()), frac(1, 2));
    for h in Gen::PRIMARIES {
        assert_eq!(constant(&e.pair(&omega, &g(h)).unwrap()), int(0));
    }
    // (y,u) is not declared after replacement and stays unknown.
    assert_eq!(e.pair(&g(Gen::Y), &g(Gen::U)).unwrap(), SymbolicScalar::var("(y,u)"));
    let pre = pre();
    let x1y = pre.engine.normalize(&w(&[(Gen::X, 1)], Base::Y)).unwrap();
    assert_eq!(constant(&pre.engine.pair(&x1y, &x1y).unwrap()), int(-2));
}

#[test]
fn saturation_values() {
    let built = build_engine(Configuration::Post, &EngineOptions::default()).unwrap();
    let v = solved_pairings(&built.saturation);
    assert_eq!(v["(x,x)"], "0");
    assert_eq!(v["(u,u)"], "-10");
    assert_eq!(v["<u,u,u>"], "180");
    assert!(!v.contains_key("(y,u)"));
}

#[test]
fn highest_weight_coefficients() {
    let hw = solve_hw_coefficients(post()).unwrap();
    assert_eq!((hw.a.clone(), hw.b.clone()), (frac(15, 49), frac(220, 49)));
    let (a, b) = (SymbolicScalar::var("a"), SymbolicScalar::var("b"));
    let l1 = &(&a.scale(&int(5)) + &b.scale(&int(3))) - &SymbolicScalar::int(15);
    let l2 = &(&a.scale(&int(6)) + &b.scale(&frac(17, 2))) - &SymbolicScalar::int(40);
    assert_eq!(hw.l1_coefficient, l1);
    assert_eq!(hw.l2_coefficient, l2);
    let v = v_state(post(), &hw.a.into(), &hw.b.into()).unwrap();
    for n in 1..=4 {
        assert!(post().apply(Mode::l(n), &v).unwrap().is_zero(), "L({n})v");
    }
    assert_eq!(v.weight(), Some(4));
}

#[test]
fn y3v_u_value() {
    assert_eq!(pair_y3v_u(post()).unwrap(), frac(60, 49));
    let (a, b) = (SymbolicScalar::var("a"), SymbolicScalar::var("b"));
    let sym = pair_y3v_u_symbolic(post(), &a, &b).unwrap();
    let inner = &(&a.scale(&int(3)) + &b.scale(&int(4))) + &SymbolicScalar::one();
    assert_eq!(sym, &SymbolicScalar::int(200) - &inner.scale(&int(10)));
}

#[test]
fn y3v_u_with_symbolic_uu_is_linear() {
    let opts = EngineOptions { kept: vec!["(u,u)".into()], ..Default::default() };
    let built = build_engine(Configuration::Post, &opts).unwrap();
    let hw = solve_hw_coefficients(&built.engine).unwrap();
    let r = pair_y3v_u_symbolic(&built.engine, &hw.a.into(), &hw.b.into()).unwrap();
    let (lin, _) = r.as_affine().expect("affine");
    assert_eq!(lin.keys().collect::<Vec<_>>(), ["(u,u)"]);
    let at = r.substitute(&[("(u,u)".to_string(), SymbolicScalar::int(-10))].into_iter().collect());
    assert_eq!(constant(&at), frac(60, 49));
}

#[test]
fn xiv_vanish() {
    for i in 0..=6 {
        assert!(check_xiv_zero(post(), i).unwrap(), "i={i}");
    }
}

#[test]
fn axioms_and_theorems_agree() {
    let opts = EngineOptions { lemma_as_axioms: true, ..Default::default() };
    let ax = build_engine(Configuration::Post, &opts).unwrap();
    assert!(ax.derivations.is_empty());
    let e = &ax.engine;
    assert_eq!(solve_hw_coefficients(e).unwrap(), solve_hw_coefficients(post()).unwrap());
    assert_eq!(pair_y3v_u(e).unwrap(), pair_y3v_u(post()).unwrap());
    assert!(check_xiv_zero(e, 6).unwrap());
    for word in [w(&[(Gen::U, 1)], Base::X), w(&[(Gen::U, 0)], Base::X), w(&[(Gen::U, -1)], Base::X)] {
        assert_eq!(e.normalize(&word).unwrap(), post().normalize(&word).unwrap(), "{word}");
    }
}

#[test]
fn contradiction() {
    let r = contradiction_report().unwrap();
    assert_eq!(r.verdict, Verdict::ContradictionEstablished);
    assert_eq!(r.verdict.to_string(), "contradiction-established");
    assert_eq!(r.y3v_u, frac(60, 49));
    assert_eq!(r.fusion_checks.len(), 10);
    assert_eq!((r.fusion_checks[0].n, r.fusion_checks[0].k), (1, 6));
    assert!(r.fusion_checks.iter().all(|c| c.dim == 0));
}

#[test]
fn rule_audit_text() {
    let text = rule_set(Configuration::Pre, &EngineOptions::default()).unwrap().to_text();
    assert_eq!(text.lines().count(), 17);
    assert!(text.contains("R6a [quadratic] (x_{-1}x)_{3}y = 0, solved for x_{1}u ; source: "));
    assert!(text.contains("R5a [evaluation] x_{1}y = alpha*x + u + 4*L(-2)1"));
    for line in text.lines() {
        assert!(!line.trim_end().ends_with("source:"), "{line}");
    }
}

#[test]
fn uncited_rules_refused() {
    let bad = Rule::new("Z", RuleKind::Adjunction, " ");
    assert_eq!(RuleSet::new().with(bad.clone()).unwrap_err(), GriessError::UncitedRule("Z".into()));
    let err = Engine::new(RuleSet::from_rules_unchecked(vec![bad])).err().unwrap();
    assert_eq!(err, GriessError::UncitedRule("Z".into()));
}

#[test]
fn missing_rules_are_reported() {
    let mut rs = rule_set(Configuration::Post, &EngineOptions::default()).unwrap();
    rs.remove(|k| matches!(k, RuleKind::HighestWeight));
    let e = Engine::new(rs).unwrap();
    let err = e.normalize(&w(&[(Gen::L, 1)], Base::X)).unwrap_err();
    assert!(matches!(err, GriessError::InsufficientRules(_)), "{err}");
    let stuck = State::mono(w(&[(Gen::Y, 2)], Base::U));
    assert!(e.check_normal(&stuck).is_err());
}

#[test]
fn weight_cap_enforced() {
    let word = w(&[(Gen::L, -3), (Gen::L, -2)], Base::X);
    assert_eq!(post().normalize(&word).unwrap_err(), GriessError::WeightCap(7));
}

// ---- properties ---------------------------------------------------------

/// Words in `L` and `x` creation modes. Products involving `y` or `u` twice
/// are not determined by the rules, so `u` modes only meet `x` and `1`.
fn creation_word(max_weight: i64) -> impl Strategy<Value = Monomial> {
    let mode = prop_oneof![(1i64..=3).prop_map(|k| Mode::l(-k)), (1i64..=3).prop_map(|k| Mode::new(Gen::X, -k))];
    let base = prop_oneof![Just(Base::Vac), Just(Base::X), Just(Base::Y), Just(Base::U)];
    (prop::collection::vec(mode, 0..3), base)
        .prop_map(|(modes, base)| Monomial::new(modes, base))
        .prop_filter("weight", move |m| m.weight() <= max_weight)
}

/// The bracket `[a, b]` of two modes on `t`, written out from the bracket
/// relations for `L` and `x` modes.
fn bracket(a: Mode, b: Mode, t: &Monomial) -> State {
    let s = State::mono(t.clone());
    let push = |m: Mode, c: Rational| State::mono(t.prepend(m)).scale_q(&c);
    match (a.gen, b.gen) {
        (Gen::L, Gen::L) => {
            let mut r = push(Mode::l(a.n + b.n), int(a.n - b.n));
            if a.n + b.n == 0 {
                r = r.add(&s.scale_q(&frac(a.n * a.n * a.n - a.n, 12)));
            }
            r
        }
        (Gen::L, _) => push(Mode::new(b.gen, a.n + b.n), int(a.n - b.n + 1)),
        (_, Gen::L) => push(Mode::new(a.gen, a.n + b.n), int(-(b.n - a.n + 1))),
        // x modes commute because x·x = 0 and (x,x) = 0.
        _ => State::zero(),
    }
}

fn lx_word() -> impl Strategy<Value = Monomial> {
    let mode = prop_oneof![(-3i64..=3).prop_map(Mode::l), (-3i64..=3).prop_map(|n| Mode::new(Gen::X, n))];
    let base = prop_oneof![Just(Base::Vac), Just(Base::X), Just(Base::Y)];
    (prop::collection::vec(mode, 1..5), base)
        .prop_map(|(modes, base)| Monomial::new(modes, base))
        .prop_filter("weight", |m| m.base.weight() + m.modes.iter().map(|d| d.degree().max(0)).sum::<i64>() <= 6)
}

/// Rewrites `w` by swapping the adjacent modes at `pos`.
fn swap_at(w: &Monomial, pos: usize) -> State {
    let (a, b) = (w.modes[pos], w.modes[pos + 1]);
    let mut swapped = w.modes.clone();
    swapped.swap(pos, pos + 1);
    let mut out = State::mono(Monomial::new(swapped, w.base));
    let tail = Monomial::new(w.modes[pos + 2..].to_vec(), w.base);
    for (mt, c) in bracket(a, b, &tail).terms() {
        let mut modes = w.modes[..pos].to_vec();
        modes.extend_from_slice(&mt.modes);
        out.add_term(Monomial::new(modes, w.base), c.clone());
    }
    out
}

fn normalize_state(e: &Engine, s: &State) -> State {
    let mut out = State::zero();
    for (m, c) in s.terms() {
        out.add_scaled(&e.normalize(m).unwrap(), c);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjunction_consistency(
        s in creation_word(4),
        t in creation_word(5),
        g in prop::sample::select(Gen::PRIMARIES.to_vec()),
    ) {
        let n = s.weight() - t.weight();
        prop_assume!((-3..=4).contains(&n));
        prop_assume!(g == Gen::X || ![s.base, t.base].iter().any(|b| matches!(b, Base::Y | Base::U)));
        let e = post();
        let (s, t) = (e.normalize(&s).unwrap(), e.normalize(&t).unwrap());
        let lhs = e.pair(&e.apply(Mode::new(g, n + 1), &s).unwrap(), &t).unwrap();
        let rhs = e.pair(&s, &e.apply(Mode::new(g, 1 - n), &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn virasoro_adjunction(s in creation_word(4), t in creation_word(5)) {
        let n = s.weight() - t.weight();
        let e = post();
        let (s, t) = (e.normalize(&s).unwrap(), e.normalize(&t).unwrap());
        let lhs = e.pair(&e.apply(Mode::l(n), &s).unwrap(), &t).unwrap();
        let rhs = e.pair(&s, &e.apply(Mode::l(-n), &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn confluence_under_swap_schedules(w in lx_word(), schedule in prop::collection::vec(0usize..8, 1..5)) {
        let e = post();
        let target = e.normalize(&w).unwrap();
        let mut s = State::mono(w.clone());
        for pick in schedule {
            let mut next = State::zero();
            for (m, c) in s.terms() {
                if m.modes.len() >= 2 {
                    next.add_scaled(&swap_at(m, pick % (m.modes.len() - 1)), c);
                } else {
                    next.add_term(m.clone(), c.clone());
                }
            }
            s = next;
        }
        prop_assert_eq!(normalize_state(e, &s), target);
    }
}
