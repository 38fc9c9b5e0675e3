//! Round-trip checks: writing a netlist as AIGER (ASCII or binary) and
//! reading it back yields an equivalent circuit.

mod common;

use common::{complete_cex, random_netlist, Rng};
use locabs::aiger::{self, parse, read_aiger, ReadOptions};
use locabs::netlist::{Netlist, WSet};
use locabs::oracle::simulate_concrete;
use locabs::sat::Lbool;
use locabs::trace::Cex;

fn full_abstr(n: &Netlist) -> WSet {
    let mut all = WSet::new();
    for &f in n.flops() {
        all.insert(f);
    }
    all
}

fn random_stimulus(n: &Netlist, depth: usize, rng: &mut Rng) -> Cex {
    let blank = Cex {
        depth,
        pis: vec![vec![Lbool::Undef; n.pis().len()]; depth + 1],
        flops: vec![vec![Lbool::Undef; n.flops().len()]; depth + 1],
    };
    complete_cex(&blank, rng)
}

/// Same interface counts and same bad-signal response to shared stimuli.
fn assert_equivalent(a: &Netlist, b: &Netlist, rng: &mut Rng, tag: &str) {
    assert_eq!(a.pis().len(), b.pis().len(), "{tag}: input count");
    assert_eq!(a.flops().len(), b.flops().len(), "{tag}: latch count");
    for _ in 0..20 {
        let depth = rng.below(6);
        let stim = random_stimulus(a, depth, rng);
        assert_eq!(
            simulate_concrete(a, &stim, false),
            simulate_concrete(b, &stim, false),
            "{tag}: diverging bad trace"
        );
    }
}

#[test]
fn binary_roundtrip_preserves_behaviour() {
    let mut rng = Rng::new(0xA1);
    for i in 0..120 {
        let n = random_netlist(&mut rng, 6, 12, 60);
        let bytes = aiger::write_binary(&n);
        let back = read_aiger(&bytes, &ReadOptions::default()).unwrap();
        assert_equivalent(&n, &back, &mut rng, &format!("binary circuit {i}"));
    }
}

#[test]
fn ascii_roundtrip_preserves_behaviour() {
    let mut rng = Rng::new(0xB2);
    for i in 0..120 {
        let n = random_netlist(&mut rng, 6, 12, 60);
        let bytes = aiger::write_abstracted(&n, &full_abstr(&n));
        let back = read_aiger(&bytes, &ReadOptions::default()).unwrap();
        assert_equivalent(&n, &back, &mut rng, &format!("ascii circuit {i}"));
    }
}

#[test]
fn ascii_and_binary_readers_agree() {
    let mut rng = Rng::new(0xC3);
    for i in 0..120 {
        let n = random_netlist(&mut rng, 6, 12, 60);
        let from_bin = read_aiger(&aiger::write_binary(&n), &ReadOptions::default()).unwrap();
        let from_asc =
            read_aiger(&aiger::write_abstracted(&n, &full_abstr(&n)), &ReadOptions::default())
                .unwrap();
        assert_eq!(from_bin.len(), from_asc.len(), "circuit {i}: gate count");
        assert_equivalent(&from_bin, &from_asc, &mut rng, &format!("readers circuit {i}"));
    }
}

#[test]
fn repeated_roundtrips_keep_counts_and_behaviour() {
    // Round trips may renumber gates but must never change the header
    // counts (no gates gained or lost) or the circuit's behaviour.
    let mut rng = Rng::new(0xD4);
    for i in 0..50 {
        let n = random_netlist(&mut rng, 5, 10, 50);
        let header = |bytes: &[u8]| {
            bytes.split(|&b| b == b'\n').next().unwrap().to_vec()
        };
        let once = aiger::write_binary(&n);
        let mut cur = read_aiger(&once, &ReadOptions::default()).unwrap();
        for trip in 0..3 {
            let bytes = aiger::write_binary(&cur);
            assert_eq!(header(&once), header(&bytes), "circuit {i} trip {trip}");
            let next = read_aiger(&bytes, &ReadOptions::default()).unwrap();
            assert_equivalent(&n, &next, &mut rng, &format!("circuit {i} trip {trip}"));
            cur = next;
        }
    }
}

#[test]
fn parse_keeps_file_level_metadata() {
    let f = parse(b"aag 1 1 0 1 0\n2\n2\ni0 request\no0 fail\nc\ngenerated for a parser test\n")
        .unwrap();
    assert_eq!(f.symbols, vec!["i0 request", "o0 fail"]);
    assert_eq!(f.comments, vec!["generated for a parser test"]);
    assert!(!f.binary);
}
