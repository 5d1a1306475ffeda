//! Answer truth-value queries against a DIMACS formula.
//!
//! Run with `cargo run --example assignment`.

use lca::cnf::CnfFormula;
use lca::sat::CnfSession;
use lca::verify::verify_sat;

// ANCHOR: dimacs
const FORMULA: &str = "c ten 5-literal clauses over 60 variables
p cnf 60 10
1 -2 3 -4 5 0
6 7 -8 9 -10 0
11 -12 13 14 -15 0
-16 17 18 -19 20 0
21 22 -23 -24 25 0
26 -27 28 29 -30 0
-31 32 -33 34 35 0
36 37 38 -39 -40 0
41 -42 43 -44 45 0
-46 47 -48 49 50 0
";
// ANCHOR_END: dimacs

fn main() {
    // ANCHOR: assign
    let formula = CnfFormula::parse(FORMULA.as_bytes()).unwrap();
    let mut session = CnfSession::new(&formula, 23).unwrap();

    // ask for two variables only
    println!("x1  = {}", session.query(0).unwrap());
    println!("x47 = {}", session.query(46).unwrap());

    // completing the sweep always lands on a satisfying assignment
    let assignment: Vec<Option<bool>> =
        (0..formula.num_vars()).map(|x| session.query(x).ok()).collect();
    verify_sat(&formula, &assignment).expect("every clause satisfied");
    println!("all {} clauses satisfied", formula.clause_count());
    // ANCHOR_END: assign
}
