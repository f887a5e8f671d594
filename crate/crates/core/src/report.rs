//! The full per-group verdict record and its stable JSON form.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::essential::{
    analyse, annihilation_check, ideal_j, kunneth_containment_for, regular_element_check, subcomodule_check, Analysis,
    GroupCohomology, HsopSearch, Verdict,
};
use crate::group::GroupTable;

pub const SCHEMA_VERSION: u32 = 1;

/// A check that may not apply to every group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gated {
    Ran(bool),
    NotRun(String),
}

impl Gated {
    pub fn failed(&self) -> bool {
        matches!(self, Gated::Ran(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub counit: bool,
    pub annihilation: bool,
    pub subcomodule: Gated,
    pub kunneth_containment: Gated,
    pub regularity: bool,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.counit
            && self.annihilation
            && self.regularity
            && !self.subcomodule.failed()
            && !self.kunneth_containment.failed()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialReport {
    pub schema: u32,
    pub group: String,
    pub p: u32,
    pub maxdeg: usize,
    /// Set when resource limits stopped the resolution below the requested
    /// degree; `maxdeg` is then the degree actually reached.
    pub degree_reduced_from: Option<usize>,
    pub d: usize,
    pub hypothesis_excluded: bool,
    pub ess_dims: Vec<usize>,
    pub hsop_degrees: Vec<usize>,
    pub generator_degrees: Vec<usize>,
    pub verdict: String,
    pub verdict_degree: Option<usize>,
    pub hilbert_ok: bool,
    pub theorem_violation: bool,
    pub checks: Checks,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl EssentialReport {
    /// Exit-code 2 territory: the theorem or an invariant disagrees.
    pub fn is_violation(&self) -> bool {
        self.theorem_violation || !self.checks.all_pass() || (self.verdict == "FreeToDegree" && !self.hilbert_ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let gated = |g: &Gated| match g {
            Gated::Ran(b) => b.to_string(),
            Gated::NotRun(why) => why.clone(),
        };
        let verdict = match self.verdict_degree {
            Some(n) => format!("{}({n})", self.verdict),
            None => self.verdict.clone(),
        };
        let mut out = format!("group {} (p = {}), degrees 0..={}\n", self.group, self.p, self.maxdeg);
        if let Some(requested) = self.degree_reduced_from {
            out += &format!("  degree bound reduced from {requested}\n");
        }
        out += &format!(
            "  d = {}, hypothesis excluded: {}\n  ess dims: {:?}\n  hsop degrees: {:?}\n  generator degrees: {:?}\n  verdict: {verdict}, hilbert ok: {}\n",
            self.d, self.hypothesis_excluded, self.ess_dims, self.hsop_degrees, self.generator_degrees, self.hilbert_ok
        );
        out += &format!(
            "  checks: counit {}, annihilation {}, subcomodule {}, kunneth containment {}, regularity {}\n",
            self.checks.counit,
            self.checks.annihilation,
            gated(&self.checks.subcomodule),
            gated(&self.checks.kunneth_containment),
            self.checks.regularity
        );
        if self.theorem_violation {
            out += "  THEOREM VIOLATION: relation found although no rank-2 elementary abelian direct factor\n";
        }
        out
    }
}

/// Runs the whole pipeline for one group.
pub fn cm_report(group: Arc<GroupTable>, maxdeg: usize, cache_dir: Option<&Path>) -> Result<EssentialReport> {
    let start = Instant::now();
    let ctx = GroupCohomology::build(group, maxdeg, cache_dir)?;
    let analysis = analyse(&ctx)?;
    report_from(&ctx, &analysis, start)
}

pub fn report_from(ctx: &GroupCohomology, analysis: &Analysis, start: Instant) -> Result<EssentialReport> {
    let g = &ctx.group;
    let hypothesis_excluded = g.has_rank2_direct_factor();
    let ess = &analysis.ess;
    let (hsop_degrees, regularity) = match &analysis.hsop {
        HsopSearch::Found(c) => {
            let mut ok = true;
            for z in &c.classes {
                ok &= regular_element_check(&ctx.ring, z)?;
            }
            (c.degrees(), ok)
        }
        HsopSearch::NotFound { .. } => (Vec::new(), true),
    };
    let mu = ctx.mu_star()?;
    let counit = ctx.counit_report(&mu)?.ok();
    let j = ideal_j(ctx)?;
    let annihilation = annihilation_check(&ctx.ring, &j, ess)?;
    let subcomodule = match subcomodule_check(ctx, &mu, ess) {
        Some(b) => Gated::Ran(b),
        None => Gated::NotRun("skipped".into()),
    };
    let kunneth_containment = if ctx.is_trivial() {
        Gated::NotRun("n/a".into())
    } else {
        match kunneth_containment_for(ctx, ess)? {
            Some(b) => Gated::Ran(b),
            None => Gated::NotRun("n/a".into()),
        }
    };
    let theorem_violation =
        matches!(analysis.verdict, Verdict::RelationFound(_)) && !hypothesis_excluded && !ess.is_zero();
    Ok(EssentialReport {
        schema: SCHEMA_VERSION,
        group: g.name().to_string(),
        p: g.p(),
        maxdeg: ctx.maxdeg(),
        degree_reduced_from: (ctx.maxdeg() < ctx.requested_maxdeg).then_some(ctx.requested_maxdeg),
        d: ctx.d(),
        hypothesis_excluded,
        ess_dims: ess.dims(),
        hsop_degrees,
        generator_degrees: analysis.generators.iter().map(|c| c.degree).collect(),
        verdict: analysis.verdict.name().to_string(),
        verdict_degree: analysis.verdict.degree(),
        hilbert_ok: analysis.hilbert_ok,
        theorem_violation,
        checks: Checks {
            counit,
            annihilation,
            subcomodule,
            kunneth_containment,
            regularity,
        },
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup;

    #[test]
    fn q8_report() {
        let r = cm_report(Arc::new(lookup("Q8").unwrap()), 10, None).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.hsop_degrees, vec![4]);
        assert_eq!(r.verdict, "FreeToDegree");
        assert_eq!(r.verdict_degree, Some(6));
        assert!(r.hilbert_ok && !r.is_violation());
        assert_eq!(r.checks.subcomodule, Gated::Ran(true));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["checks"]["kunneth_containment"], "n/a");
        assert!(json["verdict_degree"].is_number());
    }

    #[test]
    fn klein_four_is_flagged() {
        let r = cm_report(Arc::new(lookup("C2^2").unwrap()), 8, None).unwrap();
        assert!(r.hypothesis_excluded);
        assert_eq!(r.checks.subcomodule, Gated::NotRun("skipped".into()));
        assert_eq!(r.generator_degrees, vec![3]);
    }

    #[test]
    fn trivial_group_report() {
        let r = cm_report(Arc::new(GroupTable::trivial()), 3, None).unwrap();
        assert_eq!(r.verdict, "TrivialGroup");
        assert_eq!(r.ess_dims, vec![1, 0, 0, 0]);
        assert!(!r.is_violation());
    }

    #[test]
    fn forced_outcomes_set_violation() {
        let ok = cm_report(Arc::new(lookup("C4").unwrap()), 6, None).unwrap();
        assert!(!ok.is_violation());
        let relation = EssentialReport {
            verdict: "RelationFound".into(),
            verdict_degree: Some(3),
            theorem_violation: true,
            ..ok.clone()
        };
        assert!(relation.is_violation());
        assert!(relation.to_text().contains("THEOREM VIOLATION"));
        let mut failed_check = ok.clone();
        failed_check.checks.subcomodule = Gated::Ran(false);
        assert!(failed_check.is_violation());
        let mut bad_series = ok;
        bad_series.hilbert_ok = false;
        assert!(bad_series.is_violation());
    }
}
