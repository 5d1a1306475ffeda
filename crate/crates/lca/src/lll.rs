//! The shared three-phase constraint oracle behind hypergraph two-coloring
//! and k-CNF assignment.
//!
//! Both problems fit one mold: entities (vertices / variables) take one of
//! two values, and each constraint (hyperedge / clause) of width `k` is
//! violated only when *every* member matches one of a small set of forbidden
//! patterns — both-all-red and all-blue for coloring, the single all-falsified
//! pattern for clauses. The machine below is written once against that
//! abstraction; [`crate::coloring`] and [`crate::sat`] instantiate it.
//!
//! A query proceeds through up to three phases:
//!
//! 1. **Random assignment.** An unset entity draws its epoch-0 coin and the
//!    containing constraints update. A constraint whose first `k1` assigned
//!    members all track a forbidden pattern becomes *dangerous-1* and defers
//!    its unset members (now *trouble-1*) to Phase 2; a constraint that can no
//!    longer be violated is *safe* forever.
//! 2. **Bounded recoloring.** A trouble-1 query grows the component of
//!    surviving constraints around it (completing Phase 1 lazily on the
//!    frontier; safe constraints prune growth), then redraws all trouble
//!    members with a fresh epoch, up to a retry budget, until every surviving
//!    sub-component is small. The danger threshold tightens to `k1 + k2`.
//! 3. **Exhaustive finish.** Trouble-2 components are tiny, so a direct
//!    search over all assignments of their unset members finds a feasible
//!    completion; the width split guarantees one exists.
//!
//! Unlike the MIS and cover oracles, answers here depend on the order in
//! which queries arrive (replaying the same order reproduces them exactly);
//! any completed sweep still assembles one globally valid solution.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::coins::{CoinSource, CoinTape, StreamTag};
use crate::explore::explore_component;
use crate::params::WidthSplit;

/// Problem plumbing the machine needs: incidence structure, forbidden
/// patterns, and the coin stream.
pub trait LllProblem {
    /// Entity value: a color or a truth value.
    type Value: Copy + Eq + Ord + std::fmt::Debug;

    fn constraint_count(&self) -> usize;
    fn entity_count(&self) -> usize;
    /// Uniform constraint width k.
    fn width(&self) -> usize;
    /// True maximum intersection degree of the instance.
    fn intersection_degree(&self) -> usize;
    /// The `slot`-th member entity of constraint `c`, ascending by id.
    fn member(&self, c: usize, slot: usize) -> usize;
    /// Constraints containing `entity`, ascending.
    fn containing(&self, entity: usize) -> &[usize];
    /// Number of forbidden patterns per constraint (1 or 2).
    fn modes(&self) -> u32;
    /// Value the `slot`-th member must hold under forbidden pattern `mode`.
    fn mode_value(&self, c: usize, slot: usize, mode: u32) -> Self::Value;
    fn stream(&self) -> StreamTag;
    fn decode(word: u64) -> Self::Value;
    /// Enumeration order for the exhaustive phase; `false` is the smaller
    /// value.
    fn value_for_bit(bit: bool) -> Self::Value;
    /// Feasible width split for `(k, d)`, with this problem's thresholds.
    fn feasible_split(k: usize, d: usize) -> Option<WidthSplit>;
}

/// Lifecycle of an entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityState<V> {
    Unset,
    Set(V),
    /// Deferred to Phase 2 by a dangerous-1 constraint.
    Trouble1,
    /// Deferred to Phase 3 by a dangerous-2 constraint.
    Trouble2,
}

/// Lifecycle of a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintState {
    Initial,
    /// Can never be violated; absorbing.
    Safe,
    /// Hit the `k1` danger threshold in Phase 1.
    Dangerous1,
    /// Fully processed by Phase 1, still violable.
    Unsafe1,
    /// Hit the `k1 + k2` danger threshold in Phase 2.
    Dangerous2,
    /// Fully processed by Phase 2, still violable.
    Unsafe2,
}

impl ConstraintState {
    /// Still in play after Phase 1.
    pub fn surviving1(self) -> bool {
        matches!(self, ConstraintState::Dangerous1 | ConstraintState::Unsafe1)
    }

    /// Still in play after Phase 2.
    pub fn surviving2(self) -> bool {
        matches!(self, ConstraintState::Dangerous2 | ConstraintState::Unsafe2)
    }
}

/// Per-constraint incremental bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tracking {
    /// Bitmask of forbidden patterns not yet excluded by an assigned member.
    live: u8,
    /// Members carrying committed values.
    assigned: u16,
    /// Members still in [`EntityState::Unset`].
    unset: u16,
}

/// Tuning knobs; the paper-level constants are configurable because only
/// their existence is guaranteed.
#[derive(Debug, Clone, Copy)]
pub struct LllConfig {
    /// Scale in the Phase-2 component cap `⌈c1·log₂(N+1)⌉`.
    pub c1: f64,
    /// Scale in the Phase-3 component cap `⌈c2·log₂(log₂(N+2)+1)⌉`.
    pub c2: f64,
    /// Scale in the retry budget `⌈c3·log₂(N+1)/log₂(log₂(N+2)+2)⌉`.
    pub c3: f64,
    /// Explicit width split, overriding the feasibility computation. Meant
    /// for experiments and tests; the caller owns the consequences.
    pub split: Option<WidthSplit>,
}

impl Default for LllConfig {
    fn default() -> Self {
        LllConfig { c1: 8.0, c2: 8.0, c3: 2.0, split: None }
    }
}

/// Session construction failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("no feasible width split for width {width} with intersection degree {degree}")]
    Infeasible { width: usize, degree: usize },
}

/// The rare bad events of a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LllFail {
    #[error("surviving component around entity {entity} exceeds cap {cap}")]
    GrowthCap { entity: usize, cap: usize },
    #[error("no good recoloring for entity {entity} within {retries} attempts")]
    RetryBudget { entity: usize, retries: u32 },
}

/// Session counters, exposed for verification and calibration.
#[derive(Debug, Clone, Copy, Default)]
pub struct LllStats {
    pub dangerous1_transitions: u64,
    pub phase2_invocations: u64,
    pub phase2_first_epoch_good: u64,
    pub phase2_growth_failures: u64,
    pub phase2_retry_failures: u64,
    pub phase3_searches: u64,
    pub max_phase2_component: usize,
    pub max_phase3_component: usize,
}

/// One query session: one instance, one seed, one consistent solution.
///
/// Single worker only — the state machine mutates shared per-constraint state
/// on every query. Distinct sessions (e.g. distinct seeds) may run
/// concurrently on a shared instance.
pub struct LllSession<P: LllProblem, C: CoinSource = CoinTape> {
    problem: P,
    coins: C,
    split: WidthSplit,
    phase2_cap: usize,
    phase3_cap: usize,
    retries: u32,
    entity_state: Vec<EntityState<P::Value>>,
    cons_state: Vec<ConstraintState>,
    tracking: Vec<Tracking>,
    /// Next fresh Phase-2 epoch; epoch 0 belongs to Phase 1.
    next_epoch: u64,
    accepted_epoch: BTreeMap<usize, u64>,
    resolved3: BTreeMap<usize, Vec<(usize, P::Value)>>,
    stats: LllStats,
    touched: u64,
}

// scratch state of one recoloring attempt
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum AttemptState {
    Live,
    Safe,
    Dangerous2,
    Unsafe2,
}

struct AttemptOutcome<V> {
    values: Vec<(usize, V)>,
    trouble2: BTreeSet<usize>,
    /// Parallel to the component constraint list.
    constraints: Vec<(ConstraintState, Tracking)>,
}

impl<P: LllProblem, C: CoinSource> LllSession<P, C> {
    pub fn with_coins(problem: P, coins: C, config: LllConfig) -> Result<Self, SessionError> {
        let k = problem.width();
        let d = problem.intersection_degree();
        let split = match config.split {
            Some(s) => s,
            // a constraint-free instance never consults the split
            None if problem.constraint_count() == 0 => WidthSplit { k1: 1, k2: 1, k3: 1 },
            None => {
                P::feasible_split(k, d).ok_or(SessionError::Infeasible { width: k, degree: d })?
            }
        };
        let n = problem.constraint_count() as f64;
        let phase2_cap = ((config.c1 * (n + 1.0).log2()).ceil() as usize).max(1);
        let phase3_cap = ((config.c2 * ((n + 2.0).log2() + 1.0).log2()).ceil() as usize).max(1);
        let retries = {
            let numerator = config.c3 * (n + 1.0).log2();
            let denominator = ((n + 2.0).log2() + 2.0).log2();
            ((numerator / denominator).ceil() as u32).max(1)
        };
        let full_mask = (1u8 << problem.modes()) - 1;
        let entity_count = problem.entity_count();
        let constraint_count = problem.constraint_count();
        Ok(LllSession {
            split,
            phase2_cap,
            phase3_cap,
            retries,
            entity_state: vec![EntityState::Unset; entity_count],
            cons_state: vec![ConstraintState::Initial; constraint_count],
            tracking: vec![
                Tracking { live: full_mask, assigned: 0, unset: k as u16 };
                constraint_count
            ],
            next_epoch: 1,
            accepted_epoch: BTreeMap::new(),
            resolved3: BTreeMap::new(),
            stats: LllStats::default(),
            touched: 0,
            problem,
            coins,
        })
    }

    pub fn split(&self) -> WidthSplit {
        self.split
    }

    pub fn entity_count(&self) -> usize {
        self.problem.entity_count()
    }

    pub fn constraint_count(&self) -> usize {
        self.problem.constraint_count()
    }

    pub fn phase2_cap(&self) -> usize {
        self.phase2_cap
    }

    pub fn phase3_cap(&self) -> usize {
        self.phase3_cap
    }

    pub fn retries(&self) -> u32 {
        self.retries
    }

    pub fn stats(&self) -> &LllStats {
        &self.stats
    }

    /// State-machine events so far; the portable work metric.
    pub fn touched(&self) -> u64 {
        self.touched
    }

    pub fn entity_state(&self, entity: usize) -> EntityState<P::Value> {
        self.entity_state[entity]
    }

    pub fn constraint_state(&self, c: usize) -> ConstraintState {
        self.cons_state[c]
    }

    /// Epoch accepted for the Phase-2 component canonically named by its
    /// smallest constraint id, if that component has been resolved.
    pub fn accepted_epoch(&self, component: usize) -> Option<u64> {
        self.accepted_epoch.get(&component).copied()
    }

    fn d1_at(&self) -> u16 {
        self.split.k1 as u16
    }

    fn d2_at(&self) -> u16 {
        (self.split.k1 + self.split.k2) as u16
    }

    fn draw(&self, entity: usize, epoch: u64) -> P::Value {
        P::decode(self.coins.word(self.problem.stream(), entity as u64, 0, epoch))
    }

    fn slot_of(&self, c: usize, entity: usize) -> usize {
        let k = self.problem.width();
        (0..k)
            .find(|&s| self.problem.member(c, s) == entity)
            .expect("entity is a member of the constraint")
    }

    /// The value of `entity` in the session's solution.
    ///
    /// Unset entities resolve through Phase 1; trouble entities pull in
    /// Phase 2 or Phase 3 work for their component. Failures are the rare
    /// capped events; the caller may retry with another seed.
    pub fn query(&mut self, entity: usize) -> Result<P::Value, LllFail> {
        loop {
            match self.entity_state[entity] {
                EntityState::Set(v) => return Ok(v),
                EntityState::Unset => {
                    let v = self.draw(entity, 0);
                    self.assign_phase1(entity, v);
                    return Ok(v);
                }
                EntityState::Trouble1 => self.phase2(entity)?,
                EntityState::Trouble2 => self.phase3(entity),
            }
        }
    }

    // ----- Phase 1 -------------------------------------------------------

    fn set_state(&mut self, c: usize, s: ConstraintState) {
        self.cons_state[c] = s;
        self.touched += 1;
    }

    fn kill_modes(&mut self, c: usize, slot: usize, value: P::Value) {
        for mode in 0..self.problem.modes() {
            let bit = 1u8 << mode;
            if self.tracking[c].live & bit != 0 && self.problem.mode_value(c, slot, mode) != value {
                self.tracking[c].live &= !bit;
            }
        }
    }

    fn assign_phase1(&mut self, entity: usize, value: P::Value) {
        debug_assert_eq!(self.entity_state[entity], EntityState::Unset);
        self.entity_state[entity] = EntityState::Set(value);
        self.touched += 1;
        let containing: Vec<usize> = self.problem.containing(entity).to_vec();
        for c in containing {
            self.tracking[c].unset -= 1;
            if self.cons_state[c] != ConstraintState::Initial {
                debug_assert_eq!(self.cons_state[c], ConstraintState::Safe);
                continue;
            }
            let slot = self.slot_of(c, entity);
            self.kill_modes(c, slot, value);
            self.tracking[c].assigned += 1;
            let t = self.tracking[c];
            if t.live == 0 {
                self.set_state(c, ConstraintState::Safe);
            } else if t.assigned == self.d1_at() {
                self.set_state(c, ConstraintState::Dangerous1);
                self.stats.dangerous1_transitions += 1;
                self.defer_unset_members(c);
            } else if t.unset == 0 {
                self.set_state(c, ConstraintState::Unsafe1);
            }
        }
    }

    // All unset members of a freshly dangerous constraint become trouble-1.
    fn defer_unset_members(&mut self, c: usize) {
        for slot in 0..self.problem.width() {
            let u = self.problem.member(c, slot);
            if self.entity_state[u] == EntityState::Unset {
                self.mark_trouble1(u);
            }
        }
    }

    fn mark_trouble1(&mut self, entity: usize) {
        self.entity_state[entity] = EntityState::Trouble1;
        self.touched += 1;
        let containing: Vec<usize> = self.problem.containing(entity).to_vec();
        for f in containing {
            self.tracking[f].unset -= 1;
            if self.cons_state[f] == ConstraintState::Initial && self.tracking[f].unset == 0 {
                // a live pattern must remain or the safe transition would
                // have fired at the killing assignment
                debug_assert_ne!(self.tracking[f].live, 0);
                self.set_state(f, ConstraintState::Unsafe1);
            }
        }
    }

    // ----- Phase 2 -------------------------------------------------------

    /// Completes Phase 1 on a constraint: its unset members draw their
    /// epoch-0 coins in ascending order until the constraint leaves the
    /// initial state.
    fn resolve_phase1(&mut self, c: usize) {
        debug_assert!(!self.cons_state[c].surviving2());
        for slot in 0..self.problem.width() {
            if self.cons_state[c] != ConstraintState::Initial {
                break;
            }
            let u = self.problem.member(c, slot);
            if self.entity_state[u] == EntityState::Unset {
                let v = self.draw(u, 0);
                self.assign_phase1(u, v);
            }
        }
        debug_assert_ne!(self.cons_state[c], ConstraintState::Initial);
    }

    fn dependency_neighbors(&self, c: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for slot in 0..self.problem.width() {
            let u = self.problem.member(c, slot);
            out.extend(self.problem.containing(u).iter().copied().filter(|&f| f != c));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Grows the connected component of surviving-1 constraints around
    /// `entity`, lazily phase-1-completing every frontier constraint. Safe
    /// constraints prune the growth.
    fn grow_component(&mut self, entity: usize) -> Result<Vec<usize>, LllFail> {
        let mut component = BTreeSet::new();
        let mut queue: BTreeSet<usize> = self
            .problem
            .containing(entity)
            .iter()
            .copied()
            .filter(|&c| self.cons_state[c] != ConstraintState::Safe)
            .collect();
        let mut seen: BTreeSet<usize> = queue.clone();
        while let Some(c) = queue.pop_first() {
            self.resolve_phase1(c);
            if self.cons_state[c].surviving1() {
                component.insert(c);
                if component.len() > self.phase2_cap {
                    self.stats.phase2_growth_failures += 1;
                    return Err(LllFail::GrowthCap { entity, cap: self.phase2_cap });
                }
                for f in self.dependency_neighbors(c) {
                    if !seen.contains(&f) && self.cons_state[f] != ConstraintState::Safe {
                        seen.insert(f);
                        queue.insert(f);
                    }
                }
            }
        }
        Ok(component.into_iter().collect())
    }

    fn phase2(&mut self, entity: usize) -> Result<(), LllFail> {
        self.stats.phase2_invocations += 1;
        let comp = self.grow_component(entity)?;
        self.stats.max_phase2_component = self.stats.max_phase2_component.max(comp.len());
        // an empty component here would livelock the dispatch loop
        assert!(!comp.is_empty(), "trouble-1 entity {entity} has no surviving constraint");

        let k = self.problem.width();
        let mut eligible = Vec::new();
        for &c in &comp {
            for slot in 0..k {
                let u = self.problem.member(c, slot);
                if self.entity_state[u] == EntityState::Trouble1 {
                    eligible.push(u);
                }
            }
        }
        eligible.sort_unstable();
        eligible.dedup();

        for attempt in 0..self.retries {
            let epoch = self.next_epoch;
            self.next_epoch += 1;
            if let Some(outcome) = self.attempt(&comp, &eligible, epoch) {
                if attempt == 0 {
                    self.stats.phase2_first_epoch_good += 1;
                }
                self.commit_attempt(&comp, outcome, epoch);
                return Ok(());
            }
        }
        self.stats.phase2_retry_failures += 1;
        Err(LllFail::RetryBudget { entity, retries: self.retries })
    }

    /// One recoloring attempt with a fresh epoch, on scratch state. Returns
    /// the outcome if it is *good*: every surviving-2 sub-component fits the
    /// Phase-3 cap.
    fn attempt(
        &self,
        comp: &[usize],
        eligible: &[usize],
        epoch: u64,
    ) -> Option<AttemptOutcome<P::Value>> {
        let k = self.problem.width();
        let d2_at = self.d2_at();
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut state = vec![AttemptState::Live; comp.len()];
        let mut track: Vec<Tracking> = comp.iter().map(|&c| self.tracking[c]).collect();
        let mut pending: Vec<u16> = comp
            .iter()
            .map(|&c| {
                (0..k)
                    .filter(|&s| {
                        self.entity_state[self.problem.member(c, s)] == EntityState::Trouble1
                    })
                    .count() as u16
            })
            .collect();
        let mut values: Vec<(usize, P::Value)> = Vec::new();
        let mut assigned: BTreeSet<usize> = BTreeSet::new();
        let mut trouble2: BTreeSet<usize> = BTreeSet::new();

        for &u in eligible {
            if trouble2.contains(&u) {
                continue;
            }
            let v = self.draw(u, epoch);
            values.push((u, v));
            assigned.insert(u);
            for &c in self.problem.containing(u) {
                let Some(&i) = pos.get(&c) else { continue };
                if state[i] != AttemptState::Live {
                    continue;
                }
                let slot = self.slot_of(c, u);
                for mode in 0..self.problem.modes() {
                    let bit = 1u8 << mode;
                    if track[i].live & bit != 0 && self.problem.mode_value(c, slot, mode) != v {
                        track[i].live &= !bit;
                    }
                }
                track[i].assigned += 1;
                pending[i] -= 1;
                if track[i].live == 0 {
                    state[i] = AttemptState::Safe;
                } else if track[i].assigned == d2_at {
                    state[i] = AttemptState::Dangerous2;
                    self.defer_attempt_members(
                        c,
                        &pos,
                        &assigned,
                        &mut trouble2,
                        &mut state,
                        &mut pending,
                    );
                } else if pending[i] == 0 {
                    state[i] = AttemptState::Unsafe2;
                }
            }
        }
        for (i, s) in state.iter().enumerate() {
            assert_ne!(*s, AttemptState::Live, "constraint {} left unresolved by attempt", comp[i]);
        }

        // goodness: every connected component of surviving-2 constraints must
        // fit the Phase-3 cap
        let survivors: BTreeSet<usize> = comp
            .iter()
            .enumerate()
            .filter(|&(i, _)| matches!(state[i], AttemptState::Dangerous2 | AttemptState::Unsafe2))
            .map(|(_, &c)| c)
            .collect();
        let mut unvisited = survivors.clone();
        while let Some(&c0) = unvisited.iter().next() {
            let sub = explore_component(
                [c0],
                self.phase3_cap,
                |c| survivors.contains(&c),
                |c, buf| buf.extend(self.dependency_neighbors(c)),
            );
            match sub {
                Err(_) => return None,
                Ok(cluster) => {
                    for c in cluster {
                        unvisited.remove(&c);
                    }
                }
            }
        }

        let constraints = comp
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let s = match state[i] {
                    AttemptState::Safe => ConstraintState::Safe,
                    AttemptState::Dangerous2 => ConstraintState::Dangerous2,
                    AttemptState::Unsafe2 => ConstraintState::Unsafe2,
                    AttemptState::Live => unreachable!(),
                };
                (s, track[i])
            })
            .collect();
        Some(AttemptOutcome { values, trouble2, constraints })
    }

    // The scratch counterpart of `defer_unset_members`: remaining unassigned
    // trouble members of a dangerous-2 constraint drop out of the attempt.
    fn defer_attempt_members(
        &self,
        c: usize,
        pos: &HashMap<usize, usize>,
        assigned: &BTreeSet<usize>,
        trouble2: &mut BTreeSet<usize>,
        state: &mut [AttemptState],
        pending: &mut [u16],
    ) {
        for slot in 0..self.problem.width() {
            let w = self.problem.member(c, slot);
            if self.entity_state[w] != EntityState::Trouble1
                || assigned.contains(&w)
                || trouble2.contains(&w)
            {
                continue;
            }
            trouble2.insert(w);
            for &g in self.problem.containing(w) {
                let Some(&gi) = pos.get(&g) else { continue };
                if g == c || state[gi] != AttemptState::Live {
                    continue;
                }
                pending[gi] -= 1;
                if pending[gi] == 0 {
                    state[gi] = AttemptState::Unsafe2;
                }
            }
        }
    }

    fn commit_attempt(&mut self, comp: &[usize], outcome: AttemptOutcome<P::Value>, epoch: u64) {
        for &(u, v) in &outcome.values {
            debug_assert_eq!(self.entity_state[u], EntityState::Trouble1);
            self.entity_state[u] = EntityState::Set(v);
            self.touched += 1;
        }
        for &u in &outcome.trouble2 {
            debug_assert_eq!(self.entity_state[u], EntityState::Trouble1);
            self.entity_state[u] = EntityState::Trouble2;
            self.touched += 1;
        }
        for (&c, &(s, t)) in comp.iter().zip(&outcome.constraints) {
            self.cons_state[c] = s;
            self.tracking[c] = t;
            self.touched += 1;
        }
        self.accepted_epoch.insert(comp[0], epoch);
    }

    // ----- Phase 3 -------------------------------------------------------

    /// Exhaustive search over the surviving-2 component around a trouble-2
    /// entity. The accepted Phase-2 epoch guarantees the component fits the
    /// cap, and the width split guarantees a feasible assignment exists;
    /// violations of either are machine bugs, not user errors.
    fn phase3(&mut self, entity: usize) {
        self.stats.phase3_searches += 1;
        let start: Vec<usize> = self
            .problem
            .containing(entity)
            .iter()
            .copied()
            .filter(|&c| self.cons_state[c].surviving2())
            .collect();
        assert!(!start.is_empty(), "trouble-2 entity {entity} has no surviving-2 constraint");
        let component = {
            let this = &*self;
            explore_component(
                start,
                this.phase3_cap,
                |c| this.cons_state[c].surviving2(),
                |c, buf| buf.extend(this.dependency_neighbors(c)),
            )
        }
        .unwrap_or_else(|_| {
            panic!(
                "surviving-2 component around entity {entity} exceeds cap {}, \
                 which an accepted recoloring should have excluded",
                self.phase3_cap
            )
        });
        let comp: Vec<usize> = component.into_iter().collect();
        self.stats.max_phase3_component = self.stats.max_phase3_component.max(comp.len());

        let k = self.problem.width();
        let mut open = Vec::new();
        for &c in &comp {
            for slot in 0..k {
                let u = self.problem.member(c, slot);
                match self.entity_state[u] {
                    EntityState::Trouble2 => open.push(u),
                    EntityState::Set(_) => {}
                    other => panic!(
                        "member {u} of surviving-2 constraint {c} is {other:?}; \
                         expected set or trouble-2"
                    ),
                }
            }
        }
        open.sort_unstable();
        open.dedup();
        assert!(open.len() < 64, "phase-3 search space too large: {} open entities", open.len());

        let width = open.len() as u32;
        let mut found: Option<Vec<P::Value>> = None;
        'patterns: for pattern in 0..(1u64 << width) {
            let candidate: Vec<P::Value> = (0..open.len())
                .map(|j| P::value_for_bit((pattern >> (open.len() - 1 - j)) & 1 == 1))
                .collect();
            for &c in &comp {
                if self.violated_under(c, &open, &candidate) {
                    continue 'patterns;
                }
            }
            found = Some(candidate);
            break;
        }
        let candidate = found.unwrap_or_else(|| {
            panic!(
                "no feasible assignment for the {}-constraint component around entity {entity}; \
                 the width split guarantees one exists",
                comp.len()
            )
        });

        for (j, &u) in open.iter().enumerate() {
            self.entity_state[u] = EntityState::Set(candidate[j]);
            self.touched += 1;
        }
        let k16 = k as u16;
        for &c in &comp {
            // satisfied by the search; recompute live for the record
            let mut live = (1u8 << self.problem.modes()) - 1;
            for slot in 0..k {
                let u = self.problem.member(c, slot);
                let EntityState::Set(v) = self.entity_state[u] else { unreachable!() };
                for mode in 0..self.problem.modes() {
                    let bit = 1u8 << mode;
                    if live & bit != 0 && self.problem.mode_value(c, slot, mode) != v {
                        live &= !bit;
                    }
                }
            }
            debug_assert_eq!(live, 0, "phase-3 candidate left constraint {c} violable");
            self.cons_state[c] = ConstraintState::Safe;
            self.tracking[c] = Tracking { live: 0, assigned: k16, unset: 0 };
            self.touched += 1;
        }
        self.resolved3.insert(comp[0], open.iter().copied().zip(candidate).collect());
    }

    fn violated_under(&self, c: usize, open: &[usize], candidate: &[P::Value]) -> bool {
        'modes: for mode in 0..self.problem.modes() {
            for slot in 0..self.problem.width() {
                let u = self.problem.member(c, slot);
                let value = match self.entity_state[u] {
                    EntityState::Set(v) => v,
                    EntityState::Trouble2 => {
                        let j = open.binary_search(&u).expect("open lists all trouble-2 members");
                        candidate[j]
                    }
                    other => panic!("unexpected member state {other:?} in phase-3 component"),
                };
                if self.problem.mode_value(c, slot, mode) != value {
                    continue 'modes;
                }
            }
            return true;
        }
        false
    }

    // ----- Introspection --------------------------------------------------

    /// Checks every state-machine invariant against a full independent
    /// recomputation. Test instrumentation; linear in the instance.
    pub fn validate(&self) -> Result<(), String> {
        let k = self.problem.width();
        let full_mask = (1u8 << self.problem.modes()) - 1;
        for c in 0..self.problem.constraint_count() {
            let mut live = full_mask;
            let mut assigned = 0u16;
            let mut unset = 0u16;
            let (mut t1, mut t2) = (false, false);
            for slot in 0..k {
                let u = self.problem.member(c, slot);
                match self.entity_state[u] {
                    EntityState::Unset => unset += 1,
                    EntityState::Trouble1 => t1 = true,
                    EntityState::Trouble2 => t2 = true,
                    EntityState::Set(v) => {
                        assigned += 1;
                        for mode in 0..self.problem.modes() {
                            let bit = 1u8 << mode;
                            if live & bit != 0 && self.problem.mode_value(c, slot, mode) != v {
                                live &= !bit;
                            }
                        }
                    }
                }
            }
            let t = self.tracking[c];
            let state = self.cons_state[c];
            if t.unset != unset {
                return Err(format!("constraint {c}: tracked unset {} != {unset}", t.unset));
            }
            let err = |msg: String| Err(format!("constraint {c} ({state:?}): {msg}"));
            match state {
                ConstraintState::Safe => {
                    if live != 0 {
                        return err(format!("marked safe but patterns {live:#b} still live"));
                    }
                }
                ConstraintState::Initial => {
                    if t.live != live || t.assigned != assigned {
                        return err("tracking out of sync".into());
                    }
                    if live == 0 || assigned >= self.d1_at() || unset == 0 {
                        return err("should have transitioned".into());
                    }
                }
                ConstraintState::Dangerous1 => {
                    if assigned != self.d1_at() || live == 0 {
                        return err(format!("assigned {assigned}, live {live:#b}"));
                    }
                    if unset != 0 || !t1 {
                        return err("unset members must all be trouble-1".into());
                    }
                }
                ConstraintState::Unsafe1 => {
                    if live == 0 || assigned >= self.d1_at() || unset != 0 || !t1 {
                        return err(format!("assigned {assigned}, live {live:#b}"));
                    }
                }
                ConstraintState::Dangerous2 => {
                    if assigned != self.d2_at() || live == 0 || unset != 0 || t1 || !t2 {
                        return err(format!("assigned {assigned}, live {live:#b}"));
                    }
                }
                ConstraintState::Unsafe2 => {
                    if live == 0 || assigned >= self.d2_at() || unset != 0 || t1 || !t2 {
                        return err(format!("assigned {assigned}, live {live:#b}"));
                    }
                }
            }
        }
        for e in 0..self.problem.entity_count() {
            let home = match self.entity_state[e] {
                EntityState::Trouble1 => ConstraintState::Dangerous1,
                EntityState::Trouble2 => ConstraintState::Dangerous2,
                _ => continue,
            };
            if !self.problem.containing(e).iter().any(|&c| self.cons_state[c] == home) {
                return Err(format!("entity {e} is in trouble without a {home:?} home"));
            }
        }
        Ok(())
    }
}
