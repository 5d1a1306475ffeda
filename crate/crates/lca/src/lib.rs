//! Local computation algorithms: point-query oracles that answer questions
//! about one entity of a single consistent global solution, in time that
//! barely depends on the instance size.
//!
//! Instead of computing a maximal independent set, a broadcast schedule, a
//! hypergraph two-coloring or a satisfying assignment up front, each oracle
//! here answers queries — *is vertex 17 in the set? when does vertex 3
//! broadcast? what color is vertex 99? is x₄ true?* — and guarantees that
//! every answer it ever gives is a fragment of one valid solution, fixed by
//! the instance and a seed.
//!
//! # Oracles
//!
//! | Session | Question | Query order matters? |
//! |---|---|---|
//! | [`mis::MisSession`] | MIS membership of a vertex | no |
//! | [`isc::IscSession`] | cover / broadcast round of a vertex | no |
//! | [`coloring::ColoringSession`] | color of a hypergraph vertex | replayable, order-sensitive |
//! | [`sat::CnfSession`] | truth value of a variable | replayable, order-sensitive |
//!
//! All four share the same skeleton: a cheap randomized phase that settles
//! almost everything using pure per-`(entity, round, epoch)` coins
//! ([`coins::CoinTape`]), and a deterministic fallback on the small
//! components the random phase leaves behind. [`verify`] holds global
//! validators that check complete solutions by definition-chasing, and
//! [`sweep`] drives full sweeps for validation and benchmarking.
//!
//! ```
//! use lca::graph::gen_graph;
//! use lca::mis::{MisAnswer, MisSession};
//!
//! let graph = gen_graph(10_000, 4, 1);
//! let mut session = MisSession::new(&graph, 7);
//! // two queries, answered without ever materializing the set
//! let a = session.query(42).unwrap();
//! let b = session.query(4242).unwrap();
//! assert!(matches!(a, MisAnswer::In | MisAnswer::Out));
//! assert!(matches!(b, MisAnswer::In | MisAnswer::Out));
//! ```

pub mod cnf;
pub mod coins;
pub mod coloring;
pub mod error;
pub mod explore;
pub mod graph;
pub mod hypergraph;
pub mod isc;
pub mod lll;
pub mod mis;
pub mod params;
pub mod sat;
pub mod sweep;
pub mod verify;

pub use cnf::{gen_cnf, CnfFormula, Lit};
pub use coins::{CoinSource, CoinTape, StreamTag};
pub use coloring::{Color, ColoringSession};
pub use error::{GenError, ParseError};
pub use graph::{gen_graph, Graph};
pub use hypergraph::{gen_hypergraph, Hypergraph};
pub use isc::{greedy_isc, IscSession};
pub use lll::{LllConfig, LllFail, SessionError};
pub use mis::{rounds_for, MisAnswer, MisConfig, MisSession};
pub use params::{cnf_params, coloring_params, WidthSplit};
pub use sat::CnfSession;
pub use sweep::{SweepOrder, SweepReport};
pub use verify::{
    verify_broadcast, verify_coloring, verify_isc, verify_mis, verify_sat, Violation,
};
