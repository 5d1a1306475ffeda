//! Point-query oracle for a satisfying assignment of a k-CNF formula.
//!
//! Queries return the truth value of a single variable; all answers agree
//! with one satisfying assignment. Runs on the generic three-phase machine
//! with clause semantics: a clause has a single forbidden pattern (every
//! literal falsified), so it goes dangerous only half as often as a
//! hyperedge of the same width, and the width-split thresholds relax
//! accordingly (see [`crate::params::cnf_params`]).
//!
//! ```
//! use lca::cnf::gen_cnf;
//! use lca::sat::CnfSession;
//! use lca::verify::verify_sat;
//!
//! let f = gen_cnf(1000, 100, 5, 1, 3).unwrap();
//! let mut session = CnfSession::new(&f, 7).unwrap();
//! let assignment: Vec<_> = (0..f.num_vars())
//!     .map(|x| session.query(x).ok())
//!     .collect();
//! assert!(verify_sat(&f, &assignment).is_ok());
//! ```

use crate::cnf::CnfFormula;
use crate::coins::{CoinSource, CoinTape, StreamTag};
use crate::lll::{LllConfig, LllProblem, LllSession, SessionError};
use crate::params::{cnf_params, WidthSplit};

/// Clause semantics for the generic machine.
pub struct CnfProblem<'f> {
    formula: &'f CnfFormula,
}

impl LllProblem for CnfProblem<'_> {
    type Value = bool;

    fn constraint_count(&self) -> usize {
        self.formula.clause_count()
    }

    fn entity_count(&self) -> usize {
        self.formula.num_vars()
    }

    fn width(&self) -> usize {
        self.formula.width()
    }

    fn intersection_degree(&self) -> usize {
        self.formula.intersection_degree()
    }

    fn member(&self, c: usize, slot: usize) -> usize {
        self.formula.clause(c)[slot].var
    }

    fn containing(&self, entity: usize) -> &[usize] {
        self.formula.clauses_of(entity)
    }

    // one way to be falsified
    fn modes(&self) -> u32 {
        1
    }

    /// The falsifying value of the `slot`-th literal.
    fn mode_value(&self, c: usize, slot: usize, _mode: u32) -> bool {
        !self.formula.clause(c)[slot].positive
    }

    fn stream(&self) -> StreamTag {
        StreamTag::Cnf
    }

    fn decode(word: u64) -> bool {
        word & 1 == 1
    }

    fn value_for_bit(bit: bool) -> bool {
        bit
    }

    fn feasible_split(k: usize, d: usize) -> Option<WidthSplit> {
        cnf_params(k, d)
    }
}

/// A satisfying-assignment query session.
pub type CnfSession<'f, C = CoinTape> = LllSession<CnfProblem<'f>, C>;

impl<'f> CnfSession<'f> {
    /// Session with the default constants; fails if no feasible width split
    /// exists for the formula's `(k, d)`.
    pub fn new(formula: &'f CnfFormula, seed: u64) -> Result<Self, SessionError> {
        Self::with_config(formula, seed, LllConfig::default())
    }

    pub fn with_config(
        formula: &'f CnfFormula,
        seed: u64,
        config: LllConfig,
    ) -> Result<Self, SessionError> {
        Self::with_coins(CnfProblem { formula }, CoinTape::new(seed), config)
    }
}

impl<'f, C: CoinSource> CnfSession<'f, C> {
    pub fn with_stub_coins(
        formula: &'f CnfFormula,
        coins: C,
        config: LllConfig,
    ) -> Result<Self, SessionError> {
        Self::with_coins(CnfProblem { formula }, coins, config)
    }
}

/// The fair truth coin for `(variable, epoch)`.
pub fn truth_coin(coins: &impl CoinSource, variable: usize, epoch: u64) -> bool {
    coins.word(StreamTag::Cnf, variable as u64, 0, epoch) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{gen_cnf, Lit};
    use crate::lll::{ConstraintState, EntityState};
    use crate::verify::verify_sat;

    #[test]
    fn satisfying_literal_marks_clause_safe() {
        // (x0 or x1) with a forced x0 = true; width 2 admits no real split,
        // so drive the machine with an explicit one
        let f = CnfFormula::new(2, vec![vec![Lit::new(0, true), Lit::new(1, true)]]).unwrap();
        let always_true = |_: StreamTag, _: u64, _: u64, _: u64| 1u64;
        let config =
            LllConfig { split: Some(WidthSplit { k1: 1, k2: 1, k3: 0 }), ..Default::default() };
        let mut s = CnfSession::with_stub_coins(&f, always_true, config).unwrap();
        assert!(s.query(0).unwrap());
        assert_eq!(s.constraint_state(0), ConstraintState::Safe);
        assert_eq!(s.entity_state(1), EntityState::Unset);
    }

    #[test]
    fn falsifying_literal_arms_clause() {
        // (x0 or x1), x0 = false leaves the clause one literal from falsified
        let f = CnfFormula::new(2, vec![vec![Lit::new(0, true), Lit::new(1, true)]]).unwrap();
        let always_false = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let config =
            LllConfig { split: Some(WidthSplit { k1: 1, k2: 1, k3: 0 }), ..Default::default() };
        let mut s = CnfSession::with_stub_coins(&f, always_false, config).unwrap();
        assert!(!s.query(0).unwrap());
        assert_eq!(s.constraint_state(0), ConstraintState::Dangerous1);
        assert_eq!(s.entity_state(1), EntityState::Trouble1);
    }

    #[test]
    fn variables_in_safe_surroundings_answer_their_coin() {
        // two fresh variables whose clauses are already satisfied answer the
        // raw tape coin
        let f = CnfFormula::new(
            4,
            vec![vec![Lit::new(0, true), Lit::new(1, true), Lit::new(2, true), Lit::new(3, true)]],
        )
        .unwrap();
        let tape = CoinTape::new(5);
        // force variable 0 true through a handmade coin source, keeping the
        // other draws on the real tape
        let coins = move |tag: StreamTag, entity: u64, round: u64, epoch: u64| {
            if entity == 0 {
                1u64
            } else {
                tape.word(tag, entity, round, epoch)
            }
        };
        let config =
            LllConfig { split: Some(WidthSplit { k1: 1, k2: 1, k3: 2 }), ..Default::default() };
        let mut s = CnfSession::with_stub_coins(&f, coins, config).unwrap();
        assert!(s.query(0).unwrap());
        assert_eq!(s.constraint_state(0), ConstraintState::Safe);
        assert_eq!(s.query(1).unwrap(), truth_coin(&tape, 1, 0));
        assert_eq!(s.query(2).unwrap(), truth_coin(&tape, 2, 0));
        s.validate().unwrap();
    }

    #[test]
    fn sweeps_produce_satisfying_assignments() {
        for seed in 0..10 {
            let f = gen_cnf(2000, 200, 5, 1, seed).unwrap();
            let mut s = CnfSession::new(&f, seed).unwrap();
            let assignment: Vec<_> = (0..f.num_vars()).map(|x| s.query(x).ok()).collect();
            assert!(assignment.iter().all(Option::is_some), "seed {seed} failed a query");
            verify_sat(&f, &assignment).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn any_query_order_satisfies() {
        use crate::sweep::{sweep_lll, SweepOrder};
        let f = gen_cnf(2000, 200, 5, 1, 21).unwrap();
        for shuffle in 0..5 {
            let mut s = CnfSession::new(&f, 21).unwrap();
            let report = sweep_lll(&mut s, SweepOrder::Shuffled(shuffle));
            assert_eq!(report.fail_count, 0);
            verify_sat(&f, &report.answers).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn all_false_coins_still_satisfy_via_phase3() {
        // a single clause of positive literals with every coin false walks
        // the full phase 1 -> 2 -> 3 pipeline and must end satisfied
        let f = CnfFormula::new(5, vec![(0..5).map(|v| Lit::new(v, true)).collect()]).unwrap();
        let always_false = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let mut s = CnfSession::with_stub_coins(
            &f,
            always_false,
            LllConfig { split: Some(WidthSplit { k1: 1, k2: 1, k3: 3 }), ..Default::default() },
        )
        .unwrap();
        let assignment: Vec<_> = (0..5).map(|x| s.query(x).ok()).collect();
        verify_sat(&f, &assignment).unwrap();
        // x0 false (phase 1), x1 false (phase 2), and phase 3 flips the last
        // open variable in lexicographic order
        assert_eq!(
            assignment,
            vec![Some(false), Some(false), Some(false), Some(false), Some(true)]
        );
        s.validate().unwrap();
    }
}
