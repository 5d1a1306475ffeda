//! Pins the keyed coin function to its published test vectors.
//!
//! `data/coin_vectors.txt` carries `seed tag entity round epoch word` lines
//! (word in hex). Any implementation of the tape on any platform must
//! reproduce these words exactly; cross-language ports check against the
//! same file.

use lca::coins::{CoinSource, CoinTape, StreamTag};

fn tag_from(id: u64) -> StreamTag {
    match id {
        1 => StreamTag::Mis,
        2 => StreamTag::MisExtra,
        3 => StreamTag::Isc,
        4 => StreamTag::Coloring,
        5 => StreamTag::Cnf,
        other => panic!("unknown stream tag {other}"),
    }
}

#[test]
fn words_match_published_vectors() {
    let data = include_str!("data/coin_vectors.txt");
    let mut checked = 0;
    for (lineno, line) in data.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 6, "line {}: expected 6 fields", lineno + 1);
        let seed: u64 = fields[0].parse().unwrap();
        let tag = tag_from(fields[1].parse().unwrap());
        let entity: u64 = fields[2].parse().unwrap();
        let round: u64 = fields[3].parse().unwrap();
        let epoch: u64 = fields[4].parse().unwrap();
        let expected = u64::from_str_radix(fields[5], 16).unwrap();
        let got = CoinTape::new(seed).word(tag, entity, round, epoch);
        assert_eq!(
            got, expected,
            "vector mismatch at line {} (seed {seed}, tag {tag:?}, entity {entity}, round {round}, epoch {epoch})",
            lineno + 1
        );
        checked += 1;
    }
    assert_eq!(checked, 40, "vector file should carry 40 entries");
}
