use std::fmt;

use super::state::{Gen, State};
use super::GriessError;
use crate::exactlin::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum RuleKind {
    /// `[L(m), g_n] = (m-n+1) g_{m+n}` for weight-2 primaries.
    PrimaryBracket,
    /// `[L(m), L(n)] = (m-n)L(m+n) + δ_{m+n,0}(m³-m)/12`.
    VirasoroBracket,
    /// `[g_m, h_n] = Σ_j C(m,j) (g_j h)_{m+n-j}`.
    CommutatorFormula,
    /// `L(n)g = 0` for `n ≥ 1`, `L(0)g = 2g`, `L(n)1 = 0` for `n ≥ -1`.
    HighestWeight,
    /// `g_n h = value`.
    Evaluation { left: Gen, n: i64, right: Gen, value: State },
    /// `(g, h) = value`, equivalently `g_3 h = value·1`.
    Pairing { left: Gen, right: Gen, value: Rational },
    /// The weight-preserving or raising component `(x_{-1}x)_n` applied to
    /// `on` vanishes; the resulting identity is solved for `g_k h`.
    Quadratic { n: i64, on: Gen, solves: (Gen, i64, Gen) },
    /// `g_n h = Σ_j (-1)^{n+j+1} L(-1)^j/j! · h_{n+j} g`.
    SkewSymmetry,
    /// `g_{-k-1}1 = L(-1)^k g / k!`.
    VacuumCreation,
    /// `V_1 = 0`, `V_0 = ℚ1`.
    LowWeight,
    /// Modes of composite states from the iterate formula.
    IterateFormula,
    /// `(g_n a, b) = (a, g_{2-n} b)` and `(L(n)a, b) = (a, L(-n)b)`.
    Adjunction,
}

impl RuleKind {
    pub fn tag(&self) -> &'static str {
        match self {
            RuleKind::PrimaryBracket => "primary-bracket",
            RuleKind::VirasoroBracket => "virasoro-bracket",
            RuleKind::CommutatorFormula => "commutator-formula",
            RuleKind::HighestWeight => "highest-weight",
            RuleKind::Evaluation { .. } => "evaluation",
            RuleKind::Pairing { .. } => "pairing",
            RuleKind::Quadratic { .. } => "quadratic",
            RuleKind::SkewSymmetry => "skew-symmetry",
            RuleKind::VacuumCreation => "vacuum-creation",
            RuleKind::LowWeight => "low-weight",
            RuleKind::IterateFormula => "iterate-formula",
            RuleKind::Adjunction => "adjunction",
        }
    }

    fn statement(&self) -> String {
        match self {
            RuleKind::PrimaryBracket => "[L(m), g_n] = (m-n+1) g_{m+n}".into(),
            RuleKind::VirasoroBracket => "[L(m), L(n)] = (m-n) L(m+n) + (m^3-m)/12 d(m+n,0)".into(),
            RuleKind::CommutatorFormula => "[g_m, h_n] = sum_j C(m,j) (g_j h)_{m+n-j}".into(),
            RuleKind::HighestWeight => "L(n)g = 0 (n>=1), L(0)g = 2g, L(n)1 = 0 (n>=-1)".into(),
            RuleKind::Evaluation { left, n, right, value } => {
                format!("{}_{{{}}}{} = {}", left.symbol(), n, right.symbol(), value)
            }
            RuleKind::Pairing { left, right, value } => {
                format!("({},{}) = {}", left.symbol(), right.symbol(), fmt_rational(value))
            }
            RuleKind::Quadratic { n, on, solves: (g, k, h) } => format!(
                "(x_{{-1}}x)_{{{n}}}{} = 0, solved for {}_{{{k}}}{}",
                on.symbol(),
                g.symbol(),
                h.symbol()
            ),
            RuleKind::SkewSymmetry => "g_n h = sum_j (-1)^(n+j+1) L(-1)^j/j! h_{n+j} g".into(),
            RuleKind::VacuumCreation => "g_{-k-1}1 = L(-1)^k g / k!".into(),
            RuleKind::LowWeight => "V_1 = 0, V_0 = Q1".into(),
            RuleKind::IterateFormula => {
                "(a_p b)_k = sum_i (-1)^i C(p,i) [a_{p-i} b_{k+i} - (-1)^p b_{p+k-i} a_i]".into()
            }
            RuleKind::Adjunction => "(g_n a, b) = (a, g_{2-n} b), (L(n)a, b) = (a, L(-n)b)".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub id: String,
    pub kind: RuleKind,
    /// Where the rule comes from; must be non-empty.
    pub source: String,
}

impl Rule {
    pub fn new(id: &str, kind: RuleKind, source: &str) -> Self {
        Rule { id: id.to_string(), kind, source: source.to_string() }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {} ; source: {}", self.id, self.kind.tag(), self.kind.statement(), self.source)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: Rule) -> Result<(), GriessError> {
        if rule.source.trim().is_empty() {
            return Err(GriessError::UncitedRule(rule.id));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn with(mut self, rule: Rule) -> Result<Self, GriessError> {
        self.push(rule)?;
        Ok(self)
    }

    /// Builds a set without validation; [`super::Engine::new`] rejects it if
    /// any rule lacks a source.
    pub fn from_rules_unchecked(rules: Vec<Rule>) -> Self {
        RuleSet { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn validate(&self) -> Result<(), GriessError> {
        match self.rules.iter().find(|r| r.source.trim().is_empty()) {
            Some(r) => Err(GriessError::UncitedRule(r.id.clone())),
            None => Ok(()),
        }
    }

    pub fn has(&self, pred: impl Fn(&RuleKind) -> bool) -> bool {
        self.rules.iter().any(|r| pred(&r.kind))
    }

    pub fn remove(&mut self, pred: impl Fn(&RuleKind) -> bool) {
        self.rules.retain(|r| !pred(&r.kind));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}
