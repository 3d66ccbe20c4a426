//! Abstraction-based synthesis: check the consistency conditions on the
//! plant, synthesise on the abstraction, and implement the result by
//! composition with the low-level plant.

use crate::automaton::{
    equivalence_witness, included, is_nonblocking, Automaton, EventId, Inclusion, Stats, Word,
};
use crate::projection::{
    check_lcc, check_observer, extension_order, nonconflicting, parallel, project,
    ProjectionContext,
};
use crate::relational::{check_moc_report, check_oc_report, CheckReport, Verdict};
use crate::synthesis::{
    check_controllability, check_normality, check_observability, closed_loop, sup_con_normal,
    sup_normal_marked,
};
use crate::{Error, Result};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt::Write as _;

fn as_des<S: Serializer>(a: &Automaton, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_des())
}

/// The abstraction `G_hi` with `L(G_hi) = Q(L(G))` and `L_m(G_hi) = Q(L_m(G))`.
pub fn abstract_plant(g: &Automaton, ctx: &ProjectionContext) -> Result<Automaton> {
    ctx.covers(g.alphabet())?;
    Ok(project(g, &ctx.highlevel()))
}

/// Both sides of the equality between the low-level supremum and the
/// implemented high-level supremum.
#[derive(Clone, Debug, Serialize)]
pub struct EqualityCheck {
    pub equal: bool,
    /// Shortest string marked by exactly one side.
    pub witness: Option<Word>,
    /// `supN(K ∥ L_m, L, P)`, computed directly on the plant.
    #[serde(serialize_with = "as_des")]
    pub low: Automaton,
    /// `supN(K, Q(L), P_hi) ∥ L_m`.
    #[serde(serialize_with = "as_des")]
    pub composed: Automaton,
}

/// Outcome of [`hier_synthesize_normal`].
#[derive(Clone, Debug, Serialize)]
pub struct SynthesisReport {
    pub moc: CheckReport,
    pub oc: CheckReport,
    /// The high-level supervisor and the plant are nonconflicting.
    pub nonconflicting: bool,
    pub observer: bool,
    pub lcc: bool,
    #[serde(serialize_with = "as_des")]
    pub high_supervisor: Automaton,
    #[serde(serialize_with = "as_des")]
    pub low_closed_loop: Automaton,
    /// `None` until [`SynthesisReport::certify`] runs, and left `None` when
    /// MOC is violated.
    pub equality_certified: Option<bool>,
    pub equality: Option<EqualityCheck>,
    pub statistics: Vec<(String, Stats)>,
}

impl SynthesisReport {
    /// Computes both sides of the equality and records the outcome.
    pub fn certify(
        &mut self,
        g: &Automaton,
        k: &Automaton,
        ctx: &ProjectionContext,
    ) -> Result<&EqualityCheck> {
        let check = verify_equality(g, k, ctx)?;
        self.equality_certified = (!self.moc.verdict.is_violated()).then_some(check.equal);
        self.statistics
            .push(("low supremum".into(), check.low.stats()));
        Ok(self.equality.insert(check))
    }

    /// Human-readable summary with one row per artifact.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(out, "MOC:             {}", self.moc.verdict);
        let _ = writeln!(out, "OC:              {}", self.oc.verdict);
        let _ = writeln!(out, "nonconflicting:  {}", yes_no(self.nonconflicting));
        let _ = writeln!(out, "observer:        {}", yes_no(self.observer));
        let _ = writeln!(out, "LCC:             {}", yes_no(self.lcc));
        let certified = match self.equality_certified {
            Some(b) => yes_no(b).to_string(),
            None => "untested".to_string(),
        };
        let _ = writeln!(out, "equality:        {certified}");
        if let Some(EqualityCheck {
            witness: Some(w), ..
        }) = &self.equality
        {
            let _ = writeln!(out, "  differs on:    {}", crate::automaton::format_word(w));
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<20} {:>8} {:>12} {:>8}",
            "artifact", "states", "transitions", "events"
        );
        for (name, s) in &self.statistics {
            let _ = writeln!(
                out,
                "{:<20} {:>8} {:>12} {:>8}",
                name, s.states, s.transitions, s.events
            );
        }
        out
    }
}

fn require_nonblocking(g: &Automaton) -> Result<()> {
    if is_nonblocking(g) {
        Ok(())
    } else {
        Err(Error::BlockingPlant)
    }
}

/// Supremal normal sublanguage of `K` over the abstraction, observed
/// through `P_hi`.
fn high_supremum(k: &Automaton, g_hi: &Automaton, ctx: &ProjectionContext) -> Result<Automaton> {
    sup_normal_marked(k, g_hi, &ctx.high_context())
}

/// Runs the high-level synthesis pipeline for the plant `g` and the
/// high-level specification `k ⊆ Q(L_m(g))`.
///
/// MOC and OC are checked up to `bound` and reported, never raised. The
/// equality with the low-level supremum is only computed by
/// [`SynthesisReport::certify`].
pub fn hier_synthesize_normal(
    g: &Automaton,
    k: &Automaton,
    ctx: &ProjectionContext,
    bound: Option<usize>,
) -> Result<SynthesisReport> {
    require_nonblocking(g)?;
    let g_hi = abstract_plant(g, ctx)?;
    let k_hi = k.with_alphabet(g_hi.alphabet())?;
    if let Inclusion::Witness(w) = included(&k_hi, &g_hi)? {
        return Err(Error::SpecNotInAbstraction(w));
    }
    let generated = g.mark_all();
    let moc = check_moc_report(&generated, ctx, bound)?;
    let oc = check_oc_report(&generated, ctx, bound)?;
    let high = high_supremum(&k_hi, &g_hi, ctx)?;
    let nonconflicting = nonconflicting(&[&high, g])?;
    let low_closed_loop = closed_loop(&high, g)?;
    let statistics = vec![
        ("plant".to_string(), g.stats()),
        ("abstraction".to_string(), g_hi.stats()),
        ("specification".to_string(), k.stats()),
        ("high supervisor".to_string(), high.stats()),
        ("closed loop".to_string(), low_closed_loop.stats()),
    ];
    Ok(SynthesisReport {
        moc,
        oc,
        nonconflicting,
        observer: check_observer(g, ctx)?.holds(),
        lcc: check_lcc(g, ctx)?.holds(),
        high_supervisor: high,
        low_closed_loop,
        equality_certified: None,
        equality: None,
        statistics,
    })
}

/// Computes `supN(K ∥ L_m, L, P)` directly and `supN(K, Q(L), P_hi) ∥ L_m`
/// through the abstraction, and compares their marked languages.
pub fn verify_equality(
    g: &Automaton,
    k: &Automaton,
    ctx: &ProjectionContext,
) -> Result<EqualityCheck> {
    let g_hi = abstract_plant(g, ctx)?;
    let k_hi = k.with_alphabet(g_hi.alphabet())?;
    let high = high_supremum(&k_hi, &g_hi, ctx)?;
    let composed = closed_loop(&high, g)?;
    let kl = parallel(&[g, &k_hi])?;
    let low = sup_normal_marked(&kl, g, ctx)?;
    let witness = equivalence_witness(&low, &composed)?;
    Ok(EqualityCheck {
        equal: witness.is_none(),
        witness,
        low,
        composed,
    })
}

/// Controllability, observability and normality of `K` on the abstraction
/// and of `K ∥ L_m(G)` on the plant, with the hypotheses under which the
/// two levels are expected to agree.
#[derive(Clone, Debug, Serialize)]
pub struct LevelDiagnostics {
    pub high_controllable: bool,
    pub low_controllable: bool,
    pub high_observable: bool,
    pub low_observable: bool,
    pub high_normal: bool,
    pub low_normal: bool,
    pub oc: Verdict,
    pub loc: Verdict,
    pub observer: bool,
    pub lcc: bool,
    pub nonconflicting: bool,
}

pub fn level_diagnostics(
    g: &Automaton,
    k: &Automaton,
    ctx: &ProjectionContext,
    bound: Option<usize>,
) -> Result<LevelDiagnostics> {
    require_nonblocking(g)?;
    let g_hi = abstract_plant(g, ctx)?;
    let k_hi = k.with_alphabet(g_hi.alphabet())?;
    let high_ctx = ctx.high_context();
    let low_k = parallel(&[g, &k_hi])?;
    let uc = ctx.uncontrollable();
    let generated = g.mark_all();
    Ok(LevelDiagnostics {
        high_controllable: check_controllability(&k_hi, &g_hi, &uc)?.holds(),
        low_controllable: check_controllability(&low_k, g, &uc)?.holds(),
        high_observable: check_observability(&k_hi, &g_hi, &high_ctx)?.holds(),
        low_observable: check_observability(&low_k, g, ctx)?.holds(),
        high_normal: check_normality(&k_hi, &g_hi, &high_ctx)?.holds(),
        low_normal: check_normality(&low_k, g, ctx)?.holds(),
        oc: crate::relational::check_oc(&generated, ctx, bound)?,
        loc: crate::relational::check_loc(&generated, ctx, bound)?,
        observer: check_observer(g, ctx)?.holds(),
        lcc: check_lcc(g, ctx)?.holds(),
        nonconflicting: nonconflicting(&[&k_hi, g])?,
    })
}

/// Which alphabets the modular workflow settled on for one specification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceptance {
    /// `Σhi = Σo = Γo` reproduced the referential closed loop.
    SpecAlphabet,
    /// `Σo = Γhi` with the given smaller `Σhi` reproduced it.
    Shrunk,
    /// No smaller candidate worked; the referential supervisor is used.
    Referential,
}

/// Per-specification result of [`workflow_modular`].
#[derive(Clone, Debug, Serialize)]
pub struct WorkflowReport {
    /// Indices of the plants composed into the local plant.
    pub plants: Vec<usize>,
    /// `Γo`: the events of K.
    pub spec_events: BTreeSet<EventId>,
    /// Events added to `Γo` to obtain an observer with LCC, in order.
    pub extension: Vec<EventId>,
    pub observable: BTreeSet<EventId>,
    pub highlevel: BTreeSet<EventId>,
    pub acceptance: Acceptance,
    #[serde(serialize_with = "as_des")]
    pub supervisor: Automaton,
    #[serde(serialize_with = "as_des")]
    pub closed_loop: Automaton,
    pub statistics: Vec<(String, Stats)>,
}

/// Supervisor on the abstraction onto `hi`, observed through `obs`, and its
/// closed loop with the local plant.
fn attempt(
    g: &Automaton,
    k: &Automaton,
    local: &ProjectionContext,
    obs: &BTreeSet<EventId>,
    hi: &BTreeSet<EventId>,
) -> Result<(Automaton, Automaton)> {
    let ctx = local.with_observable(obs)?.with_highlevel(hi)?;
    let g_hi = abstract_plant(g, &ctx)?;
    let spec = parallel(&[&g_hi, k])?;
    let sup = sup_con_normal(&spec, &g_hi, &ctx.high_context())?;
    let cl = closed_loop(&sup, g)?;
    Ok((sup, cl))
}

/// Modular workflow over a set of plants and specifications sharing the
/// global event set of `ctx` (whose controllability flags are used).
///
/// For each specification `K`: compose the plants sharing an event with
/// `K`; extend `Γo = events(K)` to `Γhi` so that the abstraction is an
/// observer with LCC; compute the referential supervisor with
/// `Σo = Σhi = Γhi`; then look for smaller alphabets reproducing its closed
/// loop, first `Σhi = Σo = Γo`, then `Σo = Γhi` with `Σhi` growing from
/// `Γo` by the extension events in the order they were added.
pub fn workflow_modular(
    plants: &[Automaton],
    specs: &[Automaton],
    ctx: &ProjectionContext,
) -> Result<Vec<WorkflowReport>> {
    specs.iter().map(|k| workflow_one(plants, k, ctx)).collect()
}

fn workflow_one(
    plants: &[Automaton],
    k: &Automaton,
    ctx: &ProjectionContext,
) -> Result<WorkflowReport> {
    let gamma_o = k.alphabet().event_set();
    let chosen: Vec<usize> = (0..plants.len())
        .filter(|&i| {
            plants[i]
                .alphabet()
                .events()
                .iter()
                .any(|e| gamma_o.contains(e))
        })
        .collect();
    let operands: Vec<&Automaton> = chosen.iter().map(|&i| &plants[i]).collect();
    let g = parallel(&operands)?;
    let local = ProjectionContext::new(ctx.sigma().restrict(&g.alphabet().event_set()));
    if let Some(e) = gamma_o.iter().find(|e| !g.alphabet().contains(e)) {
        return Err(Error::NotInContext(e.clone()));
    }
    let extension = extension_order(&g, &local.with_highlevel(&gamma_o)?, &gamma_o)?;
    let gamma_hi: BTreeSet<EventId> = gamma_o.iter().chain(&extension).cloned().collect();

    let (ref_sup, ref_cl) = attempt(&g, k, &local, &gamma_hi, &gamma_hi)?;
    let same = |cl: &Automaton| -> Result<bool> { Ok(equivalence_witness(cl, &ref_cl)?.is_none()) };

    let mut accepted = None;
    let (sup, cl) = attempt(&g, k, &local, &gamma_o, &gamma_o)?;
    if same(&cl)? {
        accepted = Some((
            Acceptance::SpecAlphabet,
            gamma_o.clone(),
            gamma_o.clone(),
            sup,
            cl,
        ));
    } else {
        for j in 0..extension.len() {
            let hi: BTreeSet<EventId> = gamma_o.iter().chain(&extension[..j]).cloned().collect();
            let (sup, cl) = attempt(&g, k, &local, &gamma_hi, &hi)?;
            if same(&cl)? {
                accepted = Some((Acceptance::Shrunk, gamma_hi.clone(), hi, sup, cl));
                break;
            }
        }
    }
    let (acceptance, observable, highlevel, supervisor, closed) = accepted.unwrap_or((
        Acceptance::Referential,
        gamma_hi.clone(),
        gamma_hi.clone(),
        ref_sup,
        ref_cl.clone(),
    ));
    debug_assert!(equivalence_witness(&closed, &ref_cl)?.is_none());
    let statistics = vec![
        ("local plant".to_string(), g.stats()),
        ("supervisor".to_string(), supervisor.stats()),
        ("closed loop".to_string(), closed.stats()),
    ];
    Ok(WorkflowReport {
        plants: chosen,
        spec_events: gamma_o,
        extension,
        observable,
        highlevel,
        acceptance,
        supervisor,
        closed_loop: closed,
        statistics,
    })
}
