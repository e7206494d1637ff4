//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use virfusion::exactlin::{frac, int, Rational};
use virfusion::griess::{self, Configuration, EngineOptions, Gen, RuleKind, Verdict};
use virfusion::qseries::{self, GrowthVerdict, QSeries};
use virfusion::virasoro::{graded_dims_irreducible, VermaModule, VermaParams};
use virfusion::zhu::{self, BiPolynomial, ZhuReducer};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_singular_levels() -> Outcome {
    for (h, level) in [(0, 1u32), (1, 3), (4, 5)] {
        let m = VermaModule::new(VermaParams::ints(1, h));
        for l in 1..level {
            let g = m.gram_matrix(l);
            ensure(g.rank() == g.rows(), || format!("h={h}: rank drop already at level {l}"))?;
        }
        let g = m.gram_matrix(level);
        ensure(g.rows() - g.rank() == 1, || format!("h={h}: kernel at level {level} is {}", g.rows() - g.rank()))?;
        ensure(g.nullspace().len() == 1, || format!("h={h}: nullspace"))?;
    }
    for (c, h) in [(1, 2), (1, 3), (2, 1)] {
        let m = VermaModule::new(VermaParams::ints(c, h));
        for l in 0..=6 {
            let d = m.gram_matrix(l).det().map_err(|e| e.to_string())?;
            ensure(!d.is_zero(), || format!("c={c} h={h}: det vanishes at level {l}"))?;
        }
    }
    Ok(())
}

fn generator_routes() -> Outcome {
    for r in 1..=3 {
        let closed = zhu::closed_form_generator(r);
        let v = zhu::generator_by_vandermonde(r).map_err(|e| e.to_string())?;
        ensure(v == closed, || format!("vandermonde route differs at r={r}"))?;
        if r <= 2 {
            let s = zhu::generator_from_singular_vector(r).map_err(|e| e.to_string())?;
            ensure(s == closed, || format!("singular-vector route differs at r={r}"))?;
        }
    }
    Ok(())
}

fn fusion_table() -> Outcome {
    for m in 0..=3u64 {
        for n in 0..=3u64 {
            for k in 0..=8u64 {
                let interval = m.abs_diff(n) <= k && k <= m + n;
                let d = zhu::fusion_dim_squares(m, n, k).map_err(|e| e.to_string())?;
                ensure(d == u32::from(interval), || format!("({m},{n},{k}) gave {d}"))?;
                let (lo, hi) = (m.min(n) as u32, m.max(n) as i64);
                let f = zhu::closed_form_generator(lo).eval_int((k * k) as i64, hi * hi);
                ensure(f.is_zero() == interval, || format!("f-criterion disagrees at ({m},{n},{k})"))?;
            }
        }
    }
    Ok(())
}

fn lattice_identity() -> Outcome {
    let (ok, residual) = qseries::lattice_decomposition_check(50);
    ensure(ok && residual.is_zero(), || format!("residual {residual}"))?;
    // Independent form: left side built term by term against θ.
    let mut lhs = vec![0i64; 51];
    for m in 0i64..=7 {
        for (e, s) in [(m * m, 1), (m * m + 2 * m + 1, -1)] {
            if e <= 50 {
                lhs[e as usize] += s * (2 * m + 1);
            }
        }
    }
    let theta = qseries::theta_series(50);
    ensure((0..=50).all(|n| int(lhs[n]) == theta.coeff(n)), || "term-by-term comparison failed".into())
}

fn lattice_character_times_eta(order: usize) -> Result<QSeries, String> {
    let mut ch = QSeries::zero(order).shift(&-frac(1, 24));
    for m in 0i64..=14 {
        let term = qseries::irr_character_c1(&int(m * m), order).map_err(|e| e.to_string())?;
        ch = ch.add(&term.scale(&int(2 * m + 1))).map_err(|e| e.to_string())?;
    }
    Ok(qseries::eta_series(order).mul(&ch))
}

fn growth_dichotomy() -> Outcome {
    let s = lattice_character_times_eta(200)?;
    ensure(s.offset().is_zero(), || format!("offset {}", s.offset()))?;
    ensure((0..=200).all(|n| s.coeff(n).abs() <= int(2)), || "a coefficient exceeds 2".into())?;
    let r = qseries::growth_report(&s, (50, 200), &[1, 2, 3]).map_err(|e| e.to_string())?;
    ensure(r.verdict == GrowthVerdict::PolynomiallyBounded, || "lattice verdict".into())?;
    let t = qseries::nilpotent_branch_series(200);
    let witness = (1..=200usize).find(|&n| t.coeff(n).abs() > int((n as i64).pow(3)));
    ensure(witness.is_some(), || "no n <= 200 with a_n > n^3".into())?;
    let r = qseries::growth_report(&t, (50, 200), &[1, 2, 3]).map_err(|e| e.to_string())?;
    ensure(r.verdict == GrowthVerdict::SuperpolynomialEvidence, || "nilpotent verdict".into())
}

fn section5_replay() -> Outcome {
    let e = |x: griess::GriessError| x.to_string();
    let pre = griess::build_engine(Configuration::Pre, &EngineOptions::default()).map_err(e)?;
    let asserted = pre.engine.rules().has(|k| matches!(k, RuleKind::Evaluation { left: Gen::U, .. }));
    ensure(!asserted && pre.derivations.len() == 2, || "u-products were not derived".into())?;
    let u = griess::Mode::new(Gen::U, 1);
    let u1x = pre.engine.apply(u, &griess::State::gen(Gen::X)).map_err(e)?;
    ensure(u1x == griess::State::gen(Gen::X).scale_q(&int(-10)), || format!("u_1x = {u1x}"))?;
    let u0x = pre.engine.apply(griess::Mode::new(Gen::U, 0), &griess::State::gen(Gen::X)).map_err(e)?;
    let x2 = pre.engine.apply(griess::Mode::new(Gen::X, -2), &griess::State::vacuum()).map_err(e)?;
    ensure(u0x == x2.scale_q(&int(-5)), || format!("u_0x = {u0x}"))?;

    let post = griess::build_engine(Configuration::Post, &EngineOptions::default()).map_err(e)?;
    let eng = &post.engine;
    let hw = griess::solve_hw_coefficients(eng).map_err(e)?;
    ensure((hw.a.clone(), hw.b.clone()) == (frac(15, 49), frac(220, 49)), || format!("a={} b={}", hw.a, hw.b))?;
    let uu = eng.pair(&griess::State::gen(Gen::U), &griess::State::gen(Gen::U)).map_err(e)?;
    ensure(uu.as_constant() == Some(int(-10)), || format!("(u,u) = {uu}"))?;
    let y3 = griess::pair_y3v_u(eng).map_err(e)?;
    ensure(y3 == frac(60, 49), || format!("(y_3v,u) = {y3}"))?;
    ensure(griess::check_xiv_zero(eng, 6).map_err(e)?, || "x_i v != 0".into())?;
    let report = griess::contradiction_report().map_err(e)?;
    ensure(report.verdict == Verdict::ContradictionEstablished, || "verdict".into())?;
    for n in 1..=10u64 {
        let d = zhu::fusion_dim_generic(2, 2, n + 5).map_err(|x| x.to_string())?;
        ensure(d == 0, || format!("fusion_dim_generic(2,2,{}) = {d}", n + 5))?;
    }
    Ok(())
}

fn cross_module() -> Outcome {
    for m in 0..=2i64 {
        let dims = graded_dims_irreducible(&VermaParams::ints(1, m * m), 8);
        let ch = qseries::irr_character_c1(&int(m * m), 8).map_err(|e| e.to_string())?;
        let coeffs: Vec<Rational> = dims.iter().map(|&d| int(d as i64)).collect();
        ensure(coeffs == ch.coeffs(), || format!("m={m}: {dims:?} vs {ch}"))?;
    }
    Ok(())
}

fn rational(rng: &mut StdRng) -> Rational {
    frac(rng.gen_range(-8..=8), rng.gen_range(1..=4))
}

fn word(rng: &mut StdRng) -> Vec<u32> {
    loop {
        let len = rng.gen_range(0..=4);
        let w: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        if w.iter().sum::<u32>() <= 4 {
            return w;
        }
    }
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..30 {
        let p = VermaParams::new(rational(&mut rng), rational(&mut rng));
        let module = VermaModule::new(p.clone());
        for l in 0..=4 {
            ensure(module.gram_matrix(l).is_symmetric(), || format!("gram not symmetric at {p:?} level {l}"))?;
        }
    }
    for (c, h, level) in [(1, 0, 1), (1, 1, 3), (1, 4, 5), (0, 0, 1)] {
        let p = VermaParams::ints(c, h);
        let module = VermaModule::new(p.clone());
        let vs = module.singular_vectors(level).map_err(|e| e.to_string())?;
        ensure(!vs.is_empty(), || format!("no singular vector for c={c} h={h}"))?;
        for v in &vs {
            for n in [1, 2] {
                ensure(module.apply_mode(n, v).is_zero(), || format!("L({n}) fails to kill {v}"))?;
            }
        }
    }
    let module = VermaModule::new(VermaParams::new(int(1), frac(1, 4)));
    for v in module.singular_vectors(2).map_err(|e| e.to_string())? {
        ensure(module.apply_mode(1, &v).is_zero() && module.apply_mode(2, &v).is_zero(), || "h=1/4".into())?;
    }
    for _ in 0..100 {
        let h = rational(&mut rng);
        let r = ZhuReducer::new(VermaParams::new(int(1), h.clone()));
        let (w1, w2) = (word(&mut rng), word(&mut rng));
        let (a, b) = (rational(&mut rng), rational(&mut rng));
        let red = |ws: &[(Vec<u32>, Rational)]| r.reduce_words(ws).map_err(|e| e.to_string());
        let p1 = red(&[(w1.clone(), int(1))])?;
        let p2 = red(&[(w2.clone(), int(1))])?;
        let combo = red(&[(w1.clone(), a.clone()), (w2, b.clone())])?;
        ensure(combo == &p1.scale(&a) + &p2.scale(&b), || format!("linearity fails on {w1:?}"))?;
        let with = |m: u32| [vec![m], w1.clone()].concat();
        let weight = &h + int(w1.iter().sum::<u32>() as i64);
        let left = red(&[(with(2), int(1)), (with(1), int(2)), (w1.clone(), weight)])?;
        ensure(left == &BiPolynomial::x() * &p1, || format!("left star identity fails on {w1:?}"))?;
        let right = red(&[(with(2), int(1)), (with(1), int(1))])?;
        ensure(right == &p1 * &BiPolynomial::y(), || format!("right star identity fails on {w1:?}"))?;
    }
    for m in 0..=6u64 {
        for n in 0..=6u64 {
            for k in 0..=13u64 {
                let (a, b) = (zhu::fusion_dim_squares(m, n, k), zhu::fusion_dim_squares(n, m, k));
                ensure(a == b, || format!("fusion asymmetric at ({m},{n},{k})"))?;
            }
        }
    }
    for r in 0..=4 {
        let f = zhu::closed_form_generator(r);
        ensure(f.swap_xy() == -&f, || format!("f_{r} not antisymmetric"))?;
    }
    Ok(())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 8] = [
        ("singular levels at c=1 and generic non-degeneracy", c1_singular_levels, Some(Duration::from_secs(10))),
        ("generator agreement across three routes", generator_routes, Some(Duration::from_secs(60))),
        ("fusion table 0<=m,n<=3, 0<=k<=8", fusion_table, None),
        ("lattice identity through q^50", lattice_identity, Some(Duration::from_secs(1))),
        ("growth dichotomy through order 200", growth_dichotomy, None),
        ("nilpotent-case replay", section5_replay, Some(Duration::from_secs(10))),
        ("graded dimensions match irreducible characters", cross_module, None),
        ("property suites", properties, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let dt = t.elapsed();
        let r = match (r, limit) {
            (Ok(()), Some(l)) if dt > *l => Err(format!("took {dt:?}, limit {l:?}")),
            (r, _) => r,
        };
        match r {
            Ok(()) => println!("criterion {} PASS {name} ({:.2}s)", i + 1, dt.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
