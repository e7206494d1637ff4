//! Report values. Every subcommand builds one [`Report`]; text output is
//! [`Report::render_text`] and JSON output is the serde form of the same
//! value, so parsing the JSON and rendering it reproduces the text.
//!
//! Rationals are strings `p/q` (or `n`) in both forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Gram(GramReport),
    Singvec(SingvecReport),
    Bimodule(BimoduleReport),
    Fusion(FusionReport),
    Char(CharReport),
    DecompCheck(DecompReport),
    Growth(GrowthOut),
    VerifySection5(Section5Report),
    Contradiction(ContradictionOut),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramReport {
    pub c: String,
    pub h: String,
    pub level: u32,
    pub basis: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub det: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingvecReport {
    pub c: String,
    pub h: String,
    pub level: u32,
    pub vectors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleReport {
    pub r: u32,
    pub route: String,
    pub polynomial: String,
    /// Factor divided out to reach the x-monic form; `1` when none was needed.
    pub normalization: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionReport {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub generic: bool,
    pub dim: u32,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharReport {
    pub kind: String,
    pub h: Option<String>,
    pub order: usize,
    pub offset: String,
    pub coeffs: Vec<String>,
    pub series: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompReport {
    pub order: usize,
    pub holds: bool,
    pub residual: String,
    pub sl2_checks: Vec<Sl2Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Check {
    pub d1: u64,
    pub d2: u64,
    pub weights: Vec<u64>,
    pub dimension_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthOut {
    pub series: String,
    pub order: usize,
    pub window: (usize, usize),
    pub witnesses: Vec<Witness>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: u32,
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section5Report {
    pub checks: Vec<Check>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionOut {
    pub a: String,
    pub b: String,
    pub y3v_u: String,
    pub v_nonzero: bool,
    pub xiv_zero: bool,
    pub x_weight: u64,
    pub v_weight: u64,
    pub fusion: Vec<FusionCell>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionCell {
    pub n: u64,
    pub k: u64,
    pub dim: u32,
}

fn ok(b: bool) -> &'static str {
    if b {
        "OK"
    } else {
        "FAIL"
    }
}

impl Report {
    /// Whether the report records a successful verification.
    pub fn verified(&self) -> bool {
        match self {
            Report::DecompCheck(d) => d.holds && d.sl2_checks.iter().all(|c| c.dimension_ok),
            Report::VerifySection5(s) => s.ok,
            Report::Contradiction(c) => c.verdict == "contradiction-established",
            _ => true,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Gram(g) => {
                let _ = writeln!(s, "gram c={} h={} level={}", g.c, g.h, g.level);
                let _ = writeln!(s, "basis: {}", g.basis.join(", "));
                let width = g.matrix.iter().flatten().map(String::len).max().unwrap_or(1);
                for row in &g.matrix {
                    let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                    let _ = writeln!(s, "[{}]", cells.join(" "));
                }
                let _ = writeln!(s, "det = {}", g.det);
                let _ = writeln!(s, "rank = {}", g.rank);
            }
            Report::Singvec(v) => {
                let _ = writeln!(s, "singvec c={} h={} level={}", v.c, v.h, v.level);
                if v.vectors.is_empty() {
                    let _ = writeln!(s, "none");
                }
                for e in &v.vectors {
                    let _ = writeln!(s, "{e}");
                }
            }
            Report::Bimodule(b) => {
                let _ = writeln!(s, "f_{} via {} = {}", b.r, b.route, b.polynomial);
                if b.normalization != "1" {
                    let _ = writeln!(s, "note: divided by {} to make the x leading coefficient 1", b.normalization);
                }
            }
            Report::Fusion(f) => {
                let _ = writeln!(s, "dim = {}", f.dim);
                let _ = writeln!(s, "rule: {}", f.rule);
            }
            Report::Char(c) => {
                let h = c.h.as_deref().map(|h| format!(" h={h}")).unwrap_or_default();
                let _ = writeln!(s, "char {}{} order={}", c.kind, h, c.order);
                let _ = writeln!(s, "{}", c.series);
                let _ = writeln!(s, "offset = {}", c.offset);
                let _ = writeln!(s, "coeffs = [{}]", c.coeffs.join(", "));
            }
            Report::DecompCheck(d) => {
                let _ = writeln!(s, "lattice decomposition through q^{}: {}", d.order, ok(d.holds));
                let _ = writeln!(s, "residual = {}", d.residual);
                for c in &d.sl2_checks {
                    let ws: Vec<String> = c.weights.iter().map(u64::to_string).collect();
                    let _ = writeln!(s, "W{} x W{} = W{{{}}}: {}", c.d1, c.d2, ws.join(","), ok(c.dimension_ok));
                }
            }
            Report::Growth(g) => {
                let _ = writeln!(s, "growth {} order={} window=[{},{}]", g.series, g.order, g.window.0, g.window.1);
                for w in &g.witnesses {
                    match w.n {
                        Some(n) => {
                            let _ = writeln!(s, "k={}: |a_n| > n^{} first at n={}", w.k, w.k, n);
                        }
                        None => {
                            let _ = writeln!(s, "k={}: no witness", w.k);
                        }
                    }
                }
                let _ = writeln!(s, "verdict: {} (evidence only)", g.verdict);
            }
            Report::VerifySection5(r) => {
                for c in &r.checks {
                    let _ = writeln!(s, "[{}] {} = {} (expected {}) {}", c.group, c.name, c.actual, c.expected, ok(c.ok));
                }
                let _ = writeln!(s, "{}", ok(r.ok));
            }
            Report::Contradiction(c) => {
                let _ = writeln!(s, "v = u_(-1)x + a x_(-3)1 + b L(-2)x with a={} b={}", c.a, c.b);
                let _ = writeln!(s, "(y_3 v, u) = {}; v nonzero: {}", c.y3v_u, c.v_nonzero);
                let _ = writeln!(s, "x_i v = 0 for i >= 0: {}", c.xiv_zero);
                let _ = writeln!(s, "x generates L(1,{}), v generates L(1,{})", c.x_weight, c.v_weight);
                for f in &c.fusion {
                    let _ = writeln!(
                        s,
                        "n={}: dim I(L(1,{}); L(1,{}), L(1,{})) = {}",
                        f.n, f.k, c.v_weight, c.x_weight, f.dim
                    );
                }
                let _ = writeln!(s, "verdict: {}", c.verdict);
            }
        }
        s
    }
}
