#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use mgstirling::moments::{
    dist_n1, moment, moment_k_convolved, moment_nk_commutable, moment_renewal,
    moment_rk_commutable, moment_rk_scalar,
};
use mgstirling::{Error, Matrix, Method, Variable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn renewal_chain() -> mgstirling::PartitionedChain {
    // |Mbar| = 1, P_Mbar = (0), rows of P_M sum to 1/2
    chain(
        vec![
            vec![r(1, 4), r(1, 4), r(1, 2)],
            vec![r(1, 2), q(0), r(1, 2)],
            vec![r(1, 3), r(2, 3), q(0)],
        ],
        &[1, 2],
    )
}

#[test]
fn renewal_examples() {
    let c = renewal_chain();
    assert_eq!(moment_renewal(&c, 1, 0).unwrap(), q(1));
    assert_eq!(moment_renewal(&c, 1, 1).unwrap(), q(3));
    assert_eq!(moment_renewal(&c, 2, 1).unwrap(), q(6));
    for k in 1..=4 {
        let o = oracle(&c, Variable::RBar, k, 5);
        for m in 0..=5 {
            assert_eq!(
                moment_renewal(&c, k, m).unwrap(),
                o[m][(0, 0)],
                "k={k} m={m}"
            );
        }
    }
}

#[test]
fn scalar_recurrence_examples() {
    let c = two_state(r(1, 2), r(1, 3));
    assert_eq!(moment_rk_scalar(&c, 1, 1).unwrap(), r(7, 4));
    for k in 1..=4 {
        assert_eq!(moment_rk_scalar(&c, k, 0).unwrap(), q(1));
    }
    assert_eq!(
        moment_rk_scalar(&c, 2, 2).unwrap(),
        rk_oracle(&c, 2, 2)[2][(0, 0)]
    );
}

#[test]
fn commutable_examples() {
    let c = two_state(r(1, 2), r(1, 3));
    assert_eq!(
        moment_rk_commutable(&c, 2, 1).unwrap(),
        rk_oracle(&c, 2, 1)[1]
    );
    assert_eq!(
        moment_nk_commutable(&c, 2, 1).unwrap(),
        nk_oracle(&c, 2, 1)[1]
    );
    assert_eq!(
        moment_nk_commutable(&c, 2, 0).unwrap(),
        Matrix::scalar(q(1))
    );
    for m in 0..=4 {
        assert_eq!(moment_rk_commutable(&c, 1, m).unwrap(), r1_oracle(&c, m)[m]);
        assert_eq!(moment_nk_commutable(&c, 1, m).unwrap(), n1_oracle(&c, m)[m]);
    }
}

#[test]
fn non_commutable_chain_is_rejected() {
    let c = chain(
        vec![
            vec![r(1, 2), q(0), r(1, 2), q(0)],
            vec![r(1, 4), r(1, 4), q(0), r(1, 2)],
            vec![q(0), r(1, 2), r(1, 2), q(0)],
            vec![r(1, 3), q(0), r(1, 3), r(1, 3)],
        ],
        &[1, 2],
    );
    assert!(matches!(
        moment_rk_commutable(&c, 2, 1),
        Err(Error::NotCommutable { .. })
    ));
    assert!(matches!(
        moment_nk_commutable(&c, 2, 1),
        Err(Error::NotCommutable { .. })
    ));
    let err = moment(&c, Variable::R, 2, 1, Method::Commutable).unwrap_err();
    assert!(err.is_precondition());
    // the convolution oracle has no hypotheses
    assert_eq!(
        moment_k_convolved(&c, Variable::R, 2, 1).unwrap(),
        rk_oracle(&c, 2, 1)[1]
    );
}

#[test]
fn scalar_forms_name_their_failed_hypothesis() {
    let c = chain(
        vec![
            vec![r(1, 2), q(0), r(1, 2)],
            vec![r(1, 4), r(1, 4), r(1, 2)],
            vec![r(1, 3), r(1, 3), r(1, 3)],
        ],
        &[1, 2],
    );
    let msg = moment_rk_scalar(&c, 1, 1).unwrap_err().to_string();
    assert!(msg.contains("|M| must be 1"), "{msg}");
    let msg = moment_renewal(&c, 1, 1).unwrap_err().to_string();
    assert!(msg.contains("P_Mbar must be (0)"), "{msg}");
    let uneven = chain(
        vec![
            vec![r(1, 2), q(0), r(1, 2)],
            vec![r(1, 4), q(0), r(3, 4)],
            vec![r(1, 3), r(2, 3), q(0)],
        ],
        &[1, 2],
    );
    let msg = moment_renewal(&uneven, 1, 1).unwrap_err().to_string();
    assert!(msg.contains("common sum"), "{msg}");
}

#[test]
fn passage_distribution_sums_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = random_chain(&mut rng, 3, 2);
    // sum_n P_M^(n-1) P_MMbar = (I - P_M)^-1 P_MMbar, whose rows sum to 1
    let total = &(&Matrix::identity(3) - c.p_m()).inverse().unwrap() * c.p_m_mbar();
    assert_eq!(total.row_sums(), vec![q(1); 3]);
    let partial = (1..=40).fold(Matrix::zeros(3, 2), |acc, n| {
        &acc + &dist_n1(&c, n).unwrap()
    });
    assert!(partial.iter().zip(total.iter()).all(|(a, b)| a <= b));
}

#[test]
fn every_method_agrees_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let c = random_chain(&mut rng, 2, 2);
        for v in [Variable::N, Variable::R, Variable::NBar, Variable::RBar] {
            let o = oracle(&c, v, 1, 4);
            for m in 0..=4 {
                for method in [Method::Recursive, Method::Closed, Method::Convolved] {
                    let got = moment(&c, v, 1, m, method).unwrap();
                    assert_eq!(got.value, o[m], "{v} m={m} {method:?}");
                }
            }
            let o3 = oracle(&c, v, 3, 3);
            assert_eq!(moment(&c, v, 3, 3, Method::Convolved).unwrap().value, o3[3]);
            assert!(moment(&c, v, 3, 3, Method::Recursive).is_err());
        }
    }
}

#[test]
fn float_chain_tracks_exact_chain() {
    let c = two_state(r(1, 3), r(2, 5));
    let f = c.p().map(mgstirling::Scalar::to_f64);
    let cf = mgstirling::chain::PartitionedChain::partition(f, &[1]).unwrap();
    for m in 0..=4 {
        let exact = moment_k_convolved(&c, Variable::N, 2, m).unwrap()[(0, 0)].clone();
        let float = moment_k_convolved(&cf, Variable::N, 2, m).unwrap()[(0, 0)];
        let e = mgstirling::Scalar::to_f64(&exact);
        assert!((e - float).abs() <= 1e-9 * e, "m={m}: {e} vs {float}");
    }
}
