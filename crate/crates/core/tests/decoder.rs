mod common;

use proptest::prelude::*;
use qtrellis::code::{load_code, StabilizerCode};
use qtrellis::decoder::{
    css_dml_decode, css_label, css_marginal_channels, dml_decode, dml_decode_joint, forward_linear,
    forward_log, ndml_decode, ndml_decode_with, ChannelModel, DecodeMode, MarginalModel, TieBreak,
};
use qtrellis::oracle::{self, enumerate_group};
use qtrellis::pauli::{BinaryVector, PauliVector};
use qtrellis::trellis::{
    build_joint_trellis, build_min_trellis_tof, build_multigoal_trellis, Method, Trellis,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn css_trellises(name: &str) -> (qtrellis::code::LoadedCode, Trellis, Trellis) {
    let lc = load_code(name).unwrap();
    let css = lc.css.clone().unwrap();
    let tx = build_joint_trellis(&css.joint_x(), Method::ExtendedShannon).unwrap();
    let tz = build_joint_trellis(&css.joint_z(), Method::ExtendedShannon).unwrap();
    (lc, tx, tz)
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

#[test]
fn weight_one_syndrome_on_422() {
    let c = load_code("code422").unwrap().code;
    let t = build_min_trellis_tof(&c).unwrap();
    let ch = ChannelModel::depolarizing(0.1).unwrap();
    let r = ndml_decode(&t, &c, &"10".parse().unwrap(), &ch).unwrap();
    assert_eq!(r.mode, DecodeMode::Ndml);
    assert_eq!(r.error_estimate.weight(), 1);
    assert_eq!(r.error_estimate.x_mask(), 0);
    let want = (0.1f64 / 3.0) * 0.9f64.powi(3);
    assert!(rel(r.log_prob.exp(), want) < 1e-12);
}

#[test]
fn small_p_gives_minimum_weight() {
    let c = load_code("steane713").unwrap().code;
    let t = build_min_trellis_tof(&c).unwrap();
    let ch = ChannelModel::depolarizing(1e-3).unwrap();
    for sigma in common::all_syndromes(&c) {
        let r = ndml_decode(&t, &c, &sigma, &ch).unwrap();
        let rho = c.representative_from_syndrome(&sigma).unwrap();
        let min = enumerate_group(c.norm_gens(), 7)
            .unwrap()
            .iter()
            .map(|n| (rho * *n).weight())
            .min()
            .unwrap();
        assert_eq!(r.error_estimate.weight(), min);
    }
}

#[test]
fn ties_at_half() {
    let c = load_code("steane713").unwrap().code;
    let t = build_min_trellis_tof(&c).unwrap();
    let ch = ChannelModel::depolarizing(0.5).unwrap();
    for sigma in common::all_syndromes(&c).into_iter().step_by(7) {
        let (_, best) = oracle::brute_ndml(&c, &sigma, &ch).unwrap();
        for tie in [
            TieBreak::Canonical,
            TieBreak::Seeded(1),
            TieBreak::Seeded(2),
        ] {
            let r = ndml_decode_with(&t, &c, &sigma, &ch, tie).unwrap();
            assert!(rel(r.log_prob.exp(), best) < 1e-10);
            assert!(rel(ch.log_prob_vector(&r.error_estimate).exp(), best) < 1e-10);
            assert_eq!(c.syndrome(&r.error_estimate).unwrap(), sigma);
        }
    }
}

#[test]
fn dml_on_steane_matches_oracle_argmax() {
    let c = load_code("steane713").unwrap().code;
    let t = build_multigoal_trellis(&c, Method::ExtendedShannon).unwrap();
    let ch = ChannelModel::depolarizing(0.05).unwrap();
    for sigma in common::all_syndromes(&c) {
        let r = dml_decode(&t, &c, &sigma, &ch).unwrap();
        let brute = oracle::brute_dml(&c, &sigma, &ch).unwrap();
        // equally likely cosets may be resolved either way
        let win = r.winning_logical.unwrap() as usize;
        assert!(rel(brute[win], brute[argmax(&brute)]) < 1e-12);
        // the estimate lies in the winning coset
        let rho = c.representative_from_syndrome(&sigma).unwrap();
        assert_eq!(
            c.logical_label(&(r.error_estimate * rho)),
            r.winning_logical.unwrap()
        );
    }
}

#[test]
fn css_matches_brute_force_on_422() {
    let (lc, tx, tz) = css_trellises("code422");
    let css = lc.css.unwrap();
    for p in [0.02, 0.2] {
        let ch = ChannelModel::depolarizing(p).unwrap();
        for sx in ["0", "1"] {
            for sz in ["0", "1"] {
                let (sx, sz): (BinaryVector, BinaryVector) =
                    (sx.parse().unwrap(), sz.parse().unwrap());
                let r = css_dml_decode(&tx, &tz, &css, &sx, &sz, &ch, MarginalModel::Independent)
                    .unwrap();
                let (chz, chx) = css_marginal_channels(&ch, MarginalModel::Independent);
                let (zc, xc) = oracle::brute_css_dml(&css, &sx, &sz, &chz, &chx).unwrap();
                let label = css_label(2, argmax(&xc) as u64, argmax(&zc) as u64);
                assert_eq!(r.winning_logical, Some(label));
                assert_eq!(css.syndrome_x(&r.error_estimate).unwrap(), sx);
                assert_eq!(css.syndrome_z(&r.error_estimate).unwrap(), sz);
                for (cx, px) in xc.iter().enumerate() {
                    for (cz, pz) in zc.iter().enumerate() {
                        let lp = r.coset_log_probs[css_label(2, cx as u64, cz as u64) as usize];
                        assert!(rel(lp.exp(), px * pz) < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn css_exact_marginals_match_brute_force() {
    let (lc, tx, tz) = css_trellises("steane713");
    let css = lc.css.unwrap();
    let ch = ChannelModel::depolarizing(0.15).unwrap();
    let (sx, sz): (BinaryVector, BinaryVector) = ("110".parse().unwrap(), "011".parse().unwrap());
    let r = css_dml_decode(&tx, &tz, &css, &sx, &sz, &ch, MarginalModel::Exact).unwrap();
    let (chz, chx) = css_marginal_channels(&ch, MarginalModel::Exact);
    assert!((chz.prob[0] - (1.0 - 0.1)).abs() < 1e-15);
    let (zc, xc) = oracle::brute_css_dml(&css, &sx, &sz, &chz, &chx).unwrap();
    assert_eq!(
        r.winning_logical,
        Some(css_label(1, argmax(&xc) as u64, argmax(&zc) as u64))
    );
}

#[test]
fn separate_decoding_of_steane_example() {
    // estimate from the X part IIIIIIX and the Z part ZIZIIIZ
    let target: PauliVector = "ZIZIIIY".parse().unwrap();
    let (lc, tx, tz) = css_trellises("steane713");
    let css = lc.css.unwrap();
    let sx = css.syndrome_x(&target).unwrap();
    let sz = css.syndrome_z(&target).unwrap();
    assert_eq!(
        (sx.to_string(), sz.to_string()),
        ("001".to_string(), "010".to_string())
    );
    for p in [0.01, 0.05, 0.1] {
        let ch = ChannelModel::depolarizing(p).unwrap();
        let r = css_dml_decode(&tx, &tz, &css, &sx, &sz, &ch, MarginalModel::Independent).unwrap();
        assert!(
            lc.code.in_stabilizer(&(r.error_estimate * target)),
            "p={p}: {}",
            r.error_estimate
        );
    }
}

#[test]
fn zero_syndromes_decode_into_stabilizer() {
    let (lc, tx, tz) = css_trellises("steane713");
    let css = lc.css.unwrap();
    let ch = ChannelModel::depolarizing(0.01).unwrap();
    let z = BinaryVector::zeros(3);
    let r = css_dml_decode(&tx, &tz, &css, &z, &z, &ch, MarginalModel::Independent).unwrap();
    assert_eq!(r.winning_logical, Some(0));
    assert!(lc.code.in_stabilizer(&r.error_estimate));
}

#[test]
fn joint_decoding_rejects_single_goal_trellis() {
    let c = load_code("steane713").unwrap().code;
    let t = build_min_trellis_tof(&c).unwrap();
    let ch = ChannelModel::depolarizing(0.1).unwrap();
    assert!(dml_decode(&t, &c, &BinaryVector::zeros(6), &ch).is_err());
}

fn check_against_oracle(c: &StabilizerCode, p: f64) -> Result<(), TestCaseError> {
    let ch = ChannelModel::depolarizing(p).unwrap();
    let t1 = build_min_trellis_tof(c).unwrap();
    let tm = build_multigoal_trellis(c, Method::BcjrWolf).unwrap();
    for sigma in common::all_syndromes(c) {
        let r = ndml_decode(&t1, c, &sigma, &ch).unwrap();
        let (_, best) = oracle::brute_ndml(c, &sigma, &ch).unwrap();
        prop_assert!(rel(r.log_prob.exp(), best) < 1e-10);
        prop_assert_eq!(c.syndrome(&r.error_estimate).unwrap(), sigma);
        let d = dml_decode(&tm, c, &sigma, &ch).unwrap();
        let brute = oracle::brute_dml(c, &sigma, &ch).unwrap();
        for (lp, b) in d.coset_log_probs.iter().zip(&brute) {
            prop_assert!(rel(lp.exp(), *b) < 1e-9);
        }
        let total: f64 = d.coset_log_probs.iter().map(|x| x.exp()).sum();
        prop_assert!(rel(total, oracle::brute_syndrome_prob(c, &sigma, &ch).unwrap()) < 1e-9);
        prop_assert_eq!(d.ops.multiplications, tm.num_edges() as u64);
        prop_assert_eq!(
            d.ops.additions,
            (tm.num_edges() + 1 - tm.num_vertices()) as u64
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decoders_match_oracle(c in common::arb_code(6), p in 0.001f64..0.7) {
        check_against_oracle(&c, p)?;
    }

    #[test]
    fn log_and_linear_passes_agree(c in common::arb_code(7), p in 0.001f64..0.7, x in any::<u128>(), z in any::<u128>()) {
        let t = build_multigoal_trellis(&c, Method::ExtendedShannon).unwrap();
        let ch = ChannelModel::depolarizing(p).unwrap();
        let rho = PauliVector::from_masks(c.n(), x, z);
        let (log, _) = forward_log(&t, &rho, &ch).unwrap();
        let lin = forward_linear(&t, &rho, &ch).unwrap();
        for (a, b) in log.iter().zip(&lin) {
            prop_assert!(rel(a.exp(), *b) < 1e-12);
        }
    }

    #[test]
    fn coset_probabilities_ignore_stabilizer_shift(c in common::arb_code(6), p in 0.01f64..0.5, bits in any::<u128>(), pick in any::<u64>()) {
        let t = build_multigoal_trellis(&c, Method::ExtendedShannon).unwrap();
        let ch = ChannelModel::depolarizing(p).unwrap();
        let sigma = BinaryVector::from_bits(c.stab_gens().len(), bits);
        let rho = c.representative_from_syndrome(&sigma).unwrap();
        let s = c.stab_gens().iter().enumerate().filter(|(i, _)| (pick >> i) & 1 == 1).fold(PauliVector::identity(c.n()), |acc, (_, g)| acc * *g);
        let joint = c.joint();
        let a = dml_decode_joint(&t, &joint, &rho, &ch).unwrap();
        let b = dml_decode_joint(&t, &joint, &(rho * s), &ch).unwrap();
        prop_assert_eq!(a.winning_logical, b.winning_logical);
        for (x, y) in a.coset_log_probs.iter().zip(&b.coset_log_probs) {
            prop_assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }
}
