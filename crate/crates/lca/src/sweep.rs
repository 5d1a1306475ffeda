//! Full-solution sweep drivers.
//!
//! A sweep queries every entity of an instance through one session and
//! collects the per-query answers, failures and work counters into a
//! [`SweepReport`]. Sweeps are how the validators in [`crate::verify`] get a
//! whole solution to chew on, and how the benchmarks measure per-query cost.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coins::CoinSource;
use crate::isc::IscSession;
use crate::lll::{LllProblem, LllSession};
use crate::mis::{MisAnswer, MisSession};

/// Query order of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    Ascending,
    /// A seeded uniform permutation.
    Shuffled(u64),
}

/// Entity order for a sweep over `n` entities.
pub fn order_indices(n: usize, order: SweepOrder) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    if let SweepOrder::Shuffled(seed) = order {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::coins::mix(seed ^ 0x7368_7566));
        indices.shuffle(&mut rng);
    }
    indices
}

/// Everything one sweep produced. `answers` is indexed by entity id
/// regardless of query order; failed queries stay `None`, so the answer and
/// failure counts always total the entity count.
#[derive(Debug, Clone)]
pub struct SweepReport<A> {
    pub answers: Vec<Option<A>>,
    pub fail_count: usize,
    /// Largest Phase-2 component the session resolved.
    pub max_component: usize,
    /// Per-query work counter deltas, in query order.
    pub touched: Vec<u64>,
    pub total_nanos: u128,
}

impl<A> SweepReport<A> {
    pub fn fail_rate(&self) -> f64 {
        if self.answers.is_empty() {
            0.0
        } else {
            self.fail_count as f64 / self.answers.len() as f64
        }
    }

    pub fn mean_touched(&self) -> f64 {
        if self.touched.is_empty() {
            0.0
        } else {
            self.touched.iter().sum::<u64>() as f64 / self.touched.len() as f64
        }
    }

    pub fn mean_nanos_per_query(&self) -> f64 {
        if self.answers.is_empty() {
            0.0
        } else {
            self.total_nanos as f64 / self.answers.len() as f64
        }
    }
}

// The query closure returns the answer and the session's cumulative work
// counter after the query; drive turns the counter into per-query deltas.
fn drive<A>(
    n: usize,
    order: SweepOrder,
    mut query: impl FnMut(usize) -> (Option<A>, u64),
) -> SweepReport<A> {
    let start = std::time::Instant::now();
    let mut answers: Vec<Option<A>> = (0..n).map(|_| None).collect();
    let mut touched = Vec::with_capacity(n);
    let mut fail_count = 0usize;
    let mut last_counter = 0u64;
    for v in order_indices(n, order) {
        let (answer, counter) = query(v);
        touched.push(counter - last_counter);
        last_counter = counter;
        if answer.is_none() {
            fail_count += 1;
        }
        answers[v] = answer;
    }
    SweepReport {
        answers,
        fail_count,
        max_component: 0,
        touched,
        total_nanos: start.elapsed().as_nanos(),
    }
}

/// Queries MIS membership for every vertex.
pub fn sweep_mis<C: CoinSource>(
    session: &mut MisSession<'_, C>,
    order: SweepOrder,
) -> SweepReport<MisAnswer> {
    let n = session.vertex_count();
    let mut report = drive(n, order, |v| (session.query(v).ok(), session.touched()));
    report.max_component = session.max_component_seen();
    report
}

/// Queries the cover/broadcast round for every vertex.
pub fn sweep_isc<C: CoinSource>(
    session: &mut IscSession<'_, C>,
    order: SweepOrder,
) -> SweepReport<u32> {
    let n = session.vertex_count();
    let mut report = drive(n, order, |v| (session.round(v).ok(), session.touched()));
    report.max_component = session.max_component_seen();
    report
}

/// Queries the value of every entity of a constraint session (colors or
/// truth values).
pub fn sweep_lll<P: LllProblem, C: CoinSource>(
    session: &mut LllSession<P, C>,
    order: SweepOrder,
) -> SweepReport<P::Value> {
    let n = session.entity_count();
    let mut report = drive(n, order, |v| (session.query(v).ok(), session.touched()));
    report.max_component = session.stats().max_phase2_component;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_graph;

    #[test]
    fn orders_are_permutations() {
        let asc = order_indices(10, SweepOrder::Ascending);
        assert_eq!(asc, (0..10).collect::<Vec<_>>());
        let shuffled = order_indices(10, SweepOrder::Shuffled(1));
        let mut sorted = shuffled.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, asc);
        assert_eq!(shuffled, order_indices(10, SweepOrder::Shuffled(1)));
    }

    #[test]
    fn report_totals_are_consistent() {
        let g = gen_graph(128, 3, 5);
        let mut session = MisSession::new(&g, 5);
        let report = sweep_mis(&mut session, SweepOrder::Ascending);
        let answered = report.answers.iter().filter(|a| a.is_some()).count();
        assert_eq!(answered + report.fail_count, 128);
        assert_eq!(report.touched.len(), 128);
    }

    #[test]
    fn identical_sweeps_are_identical() {
        let g = gen_graph(100, 4, 2);
        let mut a = MisSession::new(&g, 9);
        let mut b = MisSession::new(&g, 9);
        let ra = sweep_mis(&mut a, SweepOrder::Ascending);
        let rb = sweep_mis(&mut b, SweepOrder::Ascending);
        assert_eq!(ra.answers, rb.answers);
        assert_eq!(ra.touched, rb.touched);
    }
}
