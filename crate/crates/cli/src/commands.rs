use virfusion::exactlin::{fmt_rational, int, Rational};
use virfusion::griess::{self, Base, Configuration, EngineOptions, Gen, Mode, Monomial, State};
use virfusion::qseries::{self, QSeries};
use virfusion::virasoro::{partitions, VermaModule, VermaParams};
use virfusion::zhu;

use crate::config::Config;
use crate::report::*;
use crate::{CharKind, Command, Group, GrowthSeries, Route};

fn q(r: &Rational) -> String {
    fmt_rational(r)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn execute(cmd: &Command, cfg: &Config) -> Result<Report, String> {
    match cmd {
        Command::Gram { c, h, level } => gram(c, h, level.unwrap_or(cfg.max_level)),
        Command::Singvec { c, h, level } => singvec(c, h, level.unwrap_or(cfg.max_level)),
        Command::Bimodule { r, route } => bimodule(*r, *route),
        Command::Fusion { m, n, k, generic } => fusion(*m, *n, *k, *generic),
        Command::Char { kind, h, c, power, order } => {
            character(*kind, h.as_ref(), c, *power, order.unwrap_or(cfg.series_order))
        }
        Command::DecompCheck { order } => Ok(decomp(order.unwrap_or(cfg.series_order))),
        Command::Growth { series, order, window, kmax } => growth(*series, *order, window, *kmax),
        Command::VerifySection5 { lemma } => section5(*lemma),
        Command::Contradiction => contradiction(),
    }
}

fn gram(c: &Rational, h: &Rational, level: u32) -> Result<Report, String> {
    let module = VermaModule::new(VermaParams::new(c.clone(), h.clone()));
    let g = module.gram_matrix(level);
    let matrix = (0..g.rows()).map(|i| g.row(i).iter().map(q).collect()).collect();
    let det = g.det().map_err(err)?;
    Ok(Report::Gram(GramReport {
        c: q(c),
        h: q(h),
        level,
        basis: partitions(level).iter().map(|p| p.to_string()).collect(),
        matrix,
        det: q(&det),
        rank: g.rank(),
    }))
}

fn singvec(c: &Rational, h: &Rational, level: u32) -> Result<Report, String> {
    let module = VermaModule::new(VermaParams::new(c.clone(), h.clone()));
    let vs = module.singular_vectors(level).map_err(err)?;
    Ok(Report::Singvec(SingvecReport {
        c: q(c),
        h: q(h),
        level,
        vectors: vs.iter().map(|v| v.to_string()).collect(),
    }))
}

fn bimodule(r: u32, route: Route) -> Result<Report, String> {
    let (poly, lead, name) = match route {
        Route::Closed => (zhu::closed_form_generator(r), int(1), "closed"),
        Route::Singular => {
            let (p, l) = zhu::generator_from_singular_vector_scaled(r).map_err(err)?;
            (p, l, "singular")
        }
        Route::Vandermonde => {
            let (p, l) = zhu::generator_by_vandermonde_scaled(r).map_err(err)?;
            (p, l, "vandermonde")
        }
    };
    Ok(Report::Bimodule(BimoduleReport {
        r,
        route: name.into(),
        polynomial: poly.to_string(),
        normalization: q(&lead),
    }))
}

fn fusion(m: u64, n: u64, k: u64, generic: bool) -> Result<Report, String> {
    let (dim, rule) = if generic {
        let d = zhu::fusion_dim_generic(m, n, k).map_err(err)?;
        (d, format!("L(1,m^2) x L(1,n) -> L(1,k) with n not a square: nonzero iff k = n = {n}"))
    } else {
        let d = zhu::fusion_dim_squares(m, n, k).map_err(err)?;
        let (lo, hi) = (m.min(n), m.max(n));
        (d, format!("|m-n| <= k <= m+n, agreeing with f_{lo}(k^2, {}) = 0", hi * hi))
    };
    Ok(Report::Fusion(FusionReport { m, n, k, generic, dim, rule }))
}

fn character(kind: CharKind, h: Option<&Rational>, c: &Rational, power: i64, order: usize) -> Result<Report, String> {
    let need_h = || h.ok_or_else(|| "--h is required for this kind".to_string());
    let (name, s): (&str, QSeries) = match kind {
        CharKind::Verma => ("verma", qseries::verma_character(c, need_h()?, order)),
        CharKind::Irr => ("irr", qseries::irr_character_c1(need_h()?, order).map_err(err)?),
        CharKind::Eta => ("eta", qseries::eta_power(power, order)),
        CharKind::Theta => ("theta", qseries::theta_series(order)),
    };
    let h = matches!(kind, CharKind::Verma | CharKind::Irr).then(|| q(h.expect("checked")));
    Ok(Report::Char(CharReport {
        kind: name.into(),
        h,
        order,
        offset: q(s.offset()),
        coeffs: s.coeffs().iter().map(q).collect(),
        series: s.to_string(),
    }))
}

fn decomp(order: usize) -> Report {
    let (holds, residual) = qseries::lattice_decomposition_check(order);
    let sl2_checks = [(2, 2), (4, 2), (0, 6), (6, 4)]
        .into_iter()
        .map(|(d1, d2)| {
            let weights = qseries::sl2_tensor_multiplicities(d1, d2).expect("even inputs");
            let dim: u64 = weights.iter().map(|w| w + 1).sum();
            Sl2Check { d1, d2, dimension_ok: dim == (d1 + 1) * (d2 + 1), weights }
        })
        .collect();
    Report::DecompCheck(DecompReport { order, holds, residual: residual.to_string(), sl2_checks })
}

fn growth(series: GrowthSeries, order: usize, window: &str, kmax: u32) -> Result<Report, String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad window {window:?}, expected lo:hi"));
    let (lo, hi) = window.split_once(':').ok_or_else(|| format!("bad window {window:?}, expected lo:hi"))?;
    let win = (parse(lo)?, parse(hi)?);
    let (name, s) = match series {
        GrowthSeries::Lattice => {
            // ch V_L = Σ (2m+1) ch L(1,m²), then one factor of η.
            let mut ch = QSeries::zero(order).shift(&-virfusion::exactlin::frac(1, 24));
            for m in 0u64.. {
                if (m * m) as usize > order {
                    break;
                }
                let term = qseries::irr_character_c1(&int((m * m) as i64), order).map_err(err)?;
                ch = ch.add(&term.scale(&int(2 * m as i64 + 1))).map_err(err)?;
            }
            ("lattice", qseries::eta_series(order).mul(&ch))
        }
        GrowthSeries::Lemma52 => ("lemma52", qseries::nilpotent_branch_series(order)),
    };
    let exps: Vec<u32> = (1..=kmax).collect();
    let r = qseries::growth_report(&s, win, &exps).map_err(err)?;
    Ok(Report::Growth(GrowthOut {
        series: name.into(),
        order,
        window: r.window,
        witnesses: r.witnesses.iter().map(|&(k, n)| Witness { k, n }).collect(),
        verdict: r.verdict.to_string(),
    }))
}

fn check(group: &str, name: &str, expected: String, actual: Result<String, String>) -> Check {
    let (actual, ok) = match actual {
        Ok(a) => (a.clone(), a == expected),
        Err(e) => (format!("error: {e}"), false),
    };
    Check { group: group.into(), name: name.into(), expected, actual, ok }
}

fn mono(modes: &[Mode], base: Base) -> Monomial {
    Monomial::new(modes.to_vec(), base)
}

fn section5(group: Group) -> Result<Report, String> {
    let want = |g: Group| group == Group::All || group == g;
    let mut checks = Vec::new();
    let opts = EngineOptions::default();
    if want(Group::Products) {
        let g = "5.4";
        let pre = griess::build_engine(Configuration::Pre, &opts).map_err(err)?;
        let e = &pre.engine;
        let u1x = e.normalize(&mono(&[Mode::new(Gen::U, 1)], Base::X)).map_err(err)?;
        checks.push(check(g, "u_1x", "-10*x".into(), Ok(u1x.to_string())));
        let u0x = e.normalize(&mono(&[Mode::new(Gen::U, 0)], Base::X)).map_err(err);
        let x2 = e.normalize(&mono(&[Mode::new(Gen::X, -2)], Base::Vac)).map_err(err)?;
        checks.push(check(g, "u_0x", x2.scale_q(&int(-5)).to_string(), u0x.map(|s| s.to_string())));
        let derived: Vec<String> = pre.derivations.iter().map(|d| d.rule_id.clone()).collect();
        checks.push(check(g, "derived from", "R6a, R6b".into(), Ok(derived.join(", "))));
        let raw = griess::build_engine(Configuration::Pre, &EngineOptions { raw: true, ..Default::default() })
            .map_err(err)?;
        let chain = griess::lemma54_chain(&raw.engine).map_err(err);
        checks.push(check(g, "(x_1x_1 + 2 sum x_(1-i)x_(1+i))y", "10*x + x_{1}u".into(), chain.map(|s| s.to_string())));
    }
    let post = griess::build_engine(Configuration::Post, &opts).map_err(err)?;
    let e = &post.engine;
    if want(Group::Pairings) {
        let g = "5.5";
        let mut bad = Vec::new();
        let omega = State::mono(mono(&[Mode::l(-2)], Base::Vac));
        for w in [State::vacuum(), State::gen(Gen::X), omega] {
            for m in -1..=2 {
                for n in (-1..=2).filter(|n| m + n >= -1) {
                    let (um, xn) = (Mode::new(Gen::U, m), Mode::new(Gen::X, n));
                    let lhs = e
                        .apply_modes(&[um, xn], &w)
                        .and_then(|a| e.apply_modes(&[xn, um], &w).map(|b| a.sub(&b)))
                        .map_err(err)?;
                    let rhs = e.apply(Mode::new(Gen::X, m + n - 1), &w).map_err(err)?.scale_q(&int(5 * (n - m)));
                    if lhs != rhs {
                        bad.push(format!("m={m} n={n} on {w}"));
                    }
                }
            }
        }
        let summary = if bad.is_empty() { "holds".to_string() } else { bad.join("; ") };
        checks.push(check(g, "[u_m, x_n] = 5(n-m)x_(m+n-1) for m+n >= -1", "holds".into(), Ok(summary)));
        let (u, x1y) = (State::gen(Gen::U), e.normalize(&mono(&[Mode::new(Gen::X, 1)], Base::Y)).map_err(err)?);
        checks.push(check(g, "(u,u)", "-10".into(), e.pair(&u, &u).map(|s| s.to_string()).map_err(err)));
        checks.push(check(g, "(x_1y, x_1y)", "-2".into(), e.pair(&x1y, &x1y).map(|s| s.to_string()).map_err(err)));
    }
    if want(Group::HighestWeight) {
        let g = "5.6";
        let hw = griess::solve_hw_coefficients(e).map_err(err);
        checks.push(check(
            g,
            "(a, b)",
            "a=15/49 b=220/49".into(),
            hw.as_ref().map(|h| format!("a={} b={}", q(&h.a), q(&h.b))).map_err(Clone::clone),
        ));
        checks.push(check(
            g,
            "x_(-2)1 coefficient of L(1)v",
            "5*a + 3*b - 15".into(),
            hw.as_ref().map(|h| h.l1_coefficient.to_string()).map_err(Clone::clone),
        ));
        checks.push(check(
            g,
            "x coefficient of L(2)v",
            "6*a + 17/2*b - 40".into(),
            hw.as_ref().map(|h| h.l2_coefficient.to_string()).map_err(Clone::clone),
        ));
        let y3 = griess::pair_y3v_u(e).map(|r| q(&r)).map_err(err);
        checks.push(check(g, "(y_3v, u)", "60/49".into(), y3));
    }
    if want(Group::Annihilation) {
        let g = "5.7";
        for i in 0..=6 {
            let r = griess::check_xiv_zero(e, i).map(|b| if b { "0" } else { "nonzero" }.to_string());
            checks.push(check(g, &format!("x_{i}v"), "0".into(), r.map_err(err)));
        }
    }
    let ok = checks.iter().all(|c| c.ok);
    Ok(Report::VerifySection5(Section5Report { checks, ok }))
}

fn contradiction() -> Result<Report, String> {
    let r = griess::contradiction_report().map_err(err)?;
    Ok(Report::Contradiction(ContradictionOut {
        a: q(&r.a),
        b: q(&r.b),
        y3v_u: q(&r.y3v_u),
        v_nonzero: r.v_nonzero,
        xiv_zero: r.xiv_zero,
        x_weight: r.x_weight,
        v_weight: r.v_weight,
        fusion: r.fusion_checks.iter().map(|c| FusionCell { n: c.n, k: c.k, dim: c.dim }).collect(),
        verdict: r.verdict.to_string(),
    }))
}
