use aqec::bounds;
use aqec::channel::{self, channel_family, ChannelFamily, KrausChannel};
use aqec::entmeas::{self, SearchOptions};
use aqec::icpovm::{self, Povm};
use aqec::linalg::{self, CMatrix};
use aqec::qalg::{self, Bipartition, DensityMatrix, PureState, TensorLayout};
use aqec::recovery;
use aqec::sample::{self, rng_from_seed};
use proptest::prelude::*;

fn state(d: usize, seed: u64) -> DensityMatrix {
    sample::ginibre_state(TensorLayout::single(d), &mut rng_from_seed(seed))
}

fn random_channel(din: usize, dout: usize, k: usize, seed: u64) -> KrausChannel {
    let k = k.clamp(din.div_ceil(dout), din * dout);
    channel_family(&ChannelFamily::RandomRankK { in_dim: din, out_dim: dout, k, seed }).unwrap()
}

fn quick(seed: u64) -> SearchOptions {
    SearchOptions { restarts: 2, ..SearchOptions::with_seed(seed) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pinsker_and_fidelity_bounds(d in 2usize..=4, s1: u64, s2: u64) {
        let (rho, sigma) = (state(d, s1), state(d, s2));
        let norm = qalg::trace_norm(&(rho.matrix() - sigma.matrix()));
        let rel = qalg::relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(norm * norm <= 2.0 * rel + 1e-9);
        prop_assert!(norm * norm <= 2.0 * std::f64::consts::LN_2 * rel + 1e-9);
        let f = qalg::fidelity(&rho, &sigma).unwrap();
        prop_assert!(f >= 1.0 - norm / 2.0 - 1e-9);
        prop_assert!(norm / 2.0 <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn mutual_information_is_a_divergence(da in 2usize..=3, db in 2usize..=3, seed: u64) {
        let sigma: DensityMatrix = sample::ginibre_state(TensorLayout::bipartite(da, db), &mut rng_from_seed(seed));
        let product = sigma.reduce(&[0]).unwrap().tensor(&sigma.reduce(&[1]).unwrap());
        let d = qalg::relative_entropy(&sigma, &product).unwrap();
        let i = qalg::mutual_information(&sigma, &Bipartition::two_party()).unwrap();
        prop_assert!((d - i).abs() <= 1e-9);
    }

    #[test]
    fn entropy_is_additive(d1 in 2usize..=3, d2 in 2usize..=4, s1: u64, s2: u64) {
        let (a, b) = (state(d1, s1), state(d2, s2));
        let joint = qalg::von_neumann_entropy(&a.tensor(&b));
        prop_assert!((joint - qalg::von_neumann_entropy(&a) - qalg::von_neumann_entropy(&b)).abs() <= 1e-9);
    }

    #[test]
    fn purification_traces_back(d in 2usize..=4, rank in 1usize..=4, seed: u64) {
        let rho: DensityMatrix = sample::random_rank_k_state(TensorLayout::single(d), rank.min(d), &mut rng_from_seed(seed));
        let psi = qalg::purify(&rho);
        let back = DensityMatrix::from_pure(&psi).reduce(&[1]).unwrap();
        prop_assert!(linalg::max_abs(&(back.matrix() - rho.matrix())) <= 1e-10);
    }

    #[test]
    fn entropy_identities_of_the_global_state(d in 2usize..=3, dp in 2usize..=3, k in 1usize..=9, s1: u64, s2: u64) {
        let rho = state(d, s1);
        let ch = random_channel(d, dp, k, s2);
        let tri = channel::global_state(&rho, &ch).unwrap();
        let s = tri.input_entropy;
        prop_assert!((tri.mutual_info_rq() + tri.mutual_info_re() - 2.0 * s).abs() <= 1e-9);
        prop_assert!(tri.coherent_information() <= s + 1e-9);
        prop_assert!((s - tri.coherent_information() - tri.mutual_info_re()).abs() <= 1e-9);
    }

    #[test]
    fn entanglement_fidelity_ignores_the_purification(d in 2usize..=3, k in 1usize..=9, s1: u64, s2: u64, s3: u64) {
        let rho = state(d, s1);
        let ch = random_channel(d, d, k, s2);
        let psi = qalg::purify(&rho);
        // a unitary on the reference gives another purification
        let u = sample::haar_unitary::<f64, _>(d, &mut rng_from_seed(s3));
        let moved = linalg::kron(&u, &linalg::identity(d)) * psi.vector();
        let other = PureState::new(moved, psi.layout().clone()).unwrap();
        let f1 = channel::entanglement_fidelity_on_purification(&psi, &ch).unwrap();
        let f2 = channel::entanglement_fidelity_on_purification(&other, &ch).unwrap();
        prop_assert!((f1 - f2).abs() <= 1e-10);
        prop_assert!((f1 - channel::entanglement_fidelity(&rho, &ch).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn dilation_reproduces_the_channel(d in 2usize..=3, dp in 2usize..=3, k in 1usize..=9, s1: u64, s2: u64) {
        let ch = random_channel(d, dp, k, s1);
        let dil = channel::stinespring_dilate(&ch).unwrap();
        prop_assert!(linalg::isometry_defect(dil.isometry()) <= 1e-10);
        let x = sample::ginibre_matrix::<f64, _>(d, d, &mut rng_from_seed(s2));
        prop_assert!(linalg::max_abs(&(dil.channel_output(&x) - ch.apply(&x))) <= 1e-9);
    }

    #[test]
    fn frame_constant_ignores_labels(d in 2usize..=4, perm_seed: u64) {
        let povm: Povm = icpovm::default_ic_povm(d).unwrap();
        let mut perm: Vec<usize> = (0..povm.len()).collect();
        // Fisher-Yates driven by the seeded generator
        let mut rng = rng_from_seed(perm_seed);
        for i in (1..perm.len()).rev() {
            let j = rand::Rng::random_range(&mut rng, 0..=i);
            perm.swap(i, j);
        }
        let k1 = icpovm::canonical_dual(&povm).unwrap().k_constant();
        let k2 = icpovm::canonical_dual(&povm.permuted(&perm)).unwrap().k_constant();
        prop_assert!((k1 - k2).abs() <= 1e-9 * k1);
    }

    #[test]
    fn duals_reconstruct_and_are_hermitian(d in 2usize..=4, seed: u64) {
        let povm: Povm = icpovm::default_ic_povm(d).unwrap();
        let dual = icpovm::canonical_dual(&povm).unwrap();
        prop_assert!(dual.max_hermiticity_defect() <= 1e-10);
        let unit = povm
            .elements()
            .iter()
            .zip(dual.duals())
            .fold(CMatrix::zeros(d, d), |acc, (p, q)| acc + q * linalg::trace(p));
        prop_assert!(linalg::max_abs(&(unit - linalg::identity::<f64>(d))) <= 1e-9);
        let x = sample::ginibre_matrix::<f64, _>(d, d, &mut rng_from_seed(seed));
        prop_assert!(icpovm::reconstruction_residual(&x, &povm, &dual).unwrap() <= 1e-9);
    }

    #[test]
    fn coherent_information_below_eof(k in 1usize..=4, s1: u64, s2: u64) {
        let rho = state(2, s1);
        let tri = channel::global_state(&rho, &random_channel(2, 2, k, s2)).unwrap();
        let e = entmeas::wootters_eof(&tri.rho_rq).unwrap();
        prop_assert!(tri.coherent_information() <= e + 1e-9);
    }

    #[test]
    fn bounds_decrease_with_loss(a in 0.0f64..0.5, b in 0.0f64..0.5) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(bounds::theorem1_bound(lo, 2, 2).unwrap() > bounds::theorem1_bound(hi, 2, 2).unwrap());
        prop_assert!(bounds::theorem2_bound(lo).unwrap() > bounds::theorem2_bound(hi).unwrap());
        prop_assert!(bounds::sw_direct_from_loss(lo).unwrap() > bounds::sw_direct_from_loss(hi).unwrap());
    }

    #[test]
    fn g_increases_on_its_domain(a in 0.0f64..=0.5, b in 0.0f64..=0.5, d in 2usize..=4) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let gl = bounds::g(lo, d).unwrap().value().unwrap();
        let gh = bounds::g(hi, d).unwrap().value().unwrap();
        prop_assert!(gl < gh);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn classical_correlations_below_mutual_information(k in 1usize..=4, s1: u64, s2: u64) {
        let tri = channel::global_state(&state(2, s1), &random_channel(2, 2, k, s2)).unwrap();
        let c = entmeas::classical_correlations(&tri.rho_re, &Bipartition::two_party(), &quick(s1)).unwrap();
        prop_assert!(c.value <= tri.mutual_info_re() + 1e-9);
        prop_assert!(c.value >= -1e-12);
    }

    #[test]
    fn product_states_carry_no_correlation(da in 2usize..=3, db in 2usize..=3, s1: u64, s2: u64) {
        let sigma = state(da, s1).tensor(&state(db, s2));
        let cut = Bipartition::two_party();
        prop_assert!(entmeas::classical_correlations(&sigma, &cut, &quick(s1)).unwrap().value.abs() <= 1e-6);
        prop_assert!(entmeas::eof(&sigma, &cut, &quick(s2)).unwrap().value.abs() <= 1e-6);
    }

    #[test]
    fn eof_does_not_grow_with_the_ensemble(rank in 1usize..=4, db in 2usize..=3, seed: u64) {
        let sigma: DensityMatrix = sample::random_rank_k_state(TensorLayout::bipartite(2, db), rank, &mut rng_from_seed(seed));
        let cut = Bipartition::two_party();
        let r = sigma.rank();
        let small = entmeas::eof(&sigma, &cut, &SearchOptions { size: Some(r * r), ..SearchOptions::with_seed(seed) }).unwrap();
        let large = entmeas::eof(&sigma, &cut, &SearchOptions { size: Some(r * r + 4), ..SearchOptions::with_seed(seed) }).unwrap();
        prop_assert!(large.value <= small.value + 1e-6, "{} > {}", large.value, small.value);
    }

    #[test]
    fn optimized_recovery_never_below_petz(k in 1usize..=4, s1: u64, s2: u64) {
        let rho = state(2, s1);
        let ch = random_channel(2, 2, k, s2);
        let petz = recovery::petz_recovery(&rho, &ch).unwrap();
        let opt = recovery::optimize_recovery(&rho, &ch, &quick(s1)).unwrap();
        prop_assert!(opt.achieved_f >= petz.achieved_f - 1e-9);
        let again = channel::composed_entanglement_fidelity(&rho, &ch, &opt.kraus).unwrap();
        prop_assert!((again - opt.achieved_f).abs() <= 1e-9);
    }

    #[test]
    fn searches_do_not_depend_on_thread_count(seed: u64) {
        let sigma: DensityMatrix = sample::ginibre_state(TensorLayout::bipartite(2, 2), &mut rng_from_seed(seed));
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| entmeas::eof(&sigma, &Bipartition::two_party(), &SearchOptions::with_seed(seed)).unwrap().value)
        };
        prop_assert_eq!(run(1).to_bits(), run(3).to_bits());
    }
}

#[test]
fn depolarizing_fidelity_on_a_grid() {
    let rho: DensityMatrix = DensityMatrix::maximally_mixed(TensorLayout::single(2));
    for i in 0..=10 {
        let p = 0.02 * i as f64;
        let ch: KrausChannel = channel_family(&ChannelFamily::Depolarizing { dim: 2, p }).unwrap();
        let f: f64 = channel::entanglement_fidelity(&rho, &ch).unwrap();
        assert!((f - (1.0 - 0.75 * p)).abs() < 1e-12);
    }
}
