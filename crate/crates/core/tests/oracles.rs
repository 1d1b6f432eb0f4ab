//! Closed-form values built without the library's own constructions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use aqec::bounds;
use aqec::channel::{self, channel_family, ChannelFamily, KrausChannel};
use aqec::entmeas::{self, SearchOptions};
use aqec::icpovm;
use aqec::linalg::{self, CMatrix, CVector};
use aqec::qalg::{self, Bipartition, DensityMatrix, PureState, TensorLayout};
use nalgebra::{Complex, DMatrix};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn mat(rows: usize, entries: &[C]) -> CMatrix<f64> {
    DMatrix::from_row_slice(rows, entries.len() / rows, entries)
}

fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::diagonal(p, TensorLayout::single(p.len())).unwrap()
}

fn h(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

fn bell() -> PureState {
    let v = CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
    PureState::new(v, TensorLayout::bipartite(2, 2)).unwrap()
}

fn opts() -> SearchOptions {
    SearchOptions::with_seed(7)
}

/// `(1-p) |Φ+><Φ+| + p I/4`
fn isotropic(p: f64) -> DensityMatrix {
    let m = bell().density().matrix() * c(1.0 - p, 0.0) + CMatrix::identity(4, 4) * c(p / 4.0, 0.0);
    DensityMatrix::new(m, TensorLayout::bipartite(2, 2)).unwrap()
}

#[test]
fn entropy_of_a_biased_qubit() {
    let s = qalg::von_neumann_entropy(&diag(&[0.75, 0.25]));
    assert!((s - 0.811_278_124_459_132_9).abs() < 1e-12);
    assert!((s - h(0.25)).abs() < 1e-14);
}

#[test]
fn divergence_from_the_maximally_mixed_qubit() {
    let d = qalg::relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5])).unwrap();
    assert!((d - 1.0).abs() < 1e-12);
    let d = qalg::relative_entropy(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0])).unwrap();
    assert!(d.is_infinite());
}

#[test]
fn mutual_information_of_bell_and_classical_states() {
    let cut = Bipartition::two_party();
    assert!((qalg::mutual_information(&bell().density(), &cut).unwrap() - 2.0).abs() < 1e-12);
    let cc: DensityMatrix = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], TensorLayout::bipartite(2, 2)).unwrap();
    assert!((qalg::mutual_information(&cc, &cut).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn trace_norm_and_fidelity_of_basis_states() {
    let z = mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    assert!((linalg::trace_norm(&z) - 2.0).abs() < 1e-12);
    let plus = PureState::normalized(CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]), TensorLayout::single(2)).unwrap();
    let f = qalg::fidelity(&diag(&[1.0, 0.0]), &plus.density()).unwrap();
    assert!((f - FRAC_1_SQRT_2).abs() < 1e-12);
    let f = qalg::fidelity(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5])).unwrap();
    assert!((f - FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn bell_partial_transpose() {
    let pt = qalg::partial_transpose(&bell().density(), &Bipartition::two_party()).unwrap();
    let mut ev = linalg::herm_eigenvalues(&pt);
    ev.sort_by(f64::total_cmp);
    let expect = [-0.5, 0.5, 0.5, 0.5];
    assert!(ev.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12), "{ev:?}");
    let ln = entmeas::log_negativity(&bell().density(), &Bipartition::two_party()).unwrap();
    assert!((ln - 1.0).abs() < 1e-12);
}

#[test]
fn identity_choi_matrix() {
    let choi = channel::choi_from_kraus(&KrausChannel::<f64>::identity(2));
    let mut expect = CMatrix::zeros(4, 4);
    for i in [0, 3] {
        for j in [0, 3] {
            expect[(i, j)] = c(1.0, 0.0);
        }
    }
    assert!(linalg::max_abs(&(choi - expect)) < 1e-14);
}

#[test]
fn depolarizing_on_the_maximally_mixed_qubit() {
    let rho = diag(&[0.5, 0.5]);
    for p in [0.0, 0.1, 0.37, 0.8, 1.0] {
        let ch: KrausChannel = channel_family(&ChannelFamily::Depolarizing { dim: 2, p }).unwrap();
        // R Q' ends in the isotropic state, Q' stays maximally mixed
        let spectrum = [1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0];
        let f = channel::entanglement_fidelity(&rho, &ch).unwrap();
        assert!((f - spectrum[0]).abs() < 1e-12);
        let ic = channel::coherent_information(&rho, &ch).unwrap();
        assert!((ic - (1.0 - shannon(&spectrum))).abs() < 1e-10, "p={p}: {ic}");
        let tri = channel::global_state(&rho, &ch).unwrap();
        assert!(linalg::max_abs(&(tri.rho_rq.matrix() - isotropic(p).matrix())) < 1e-12);
    }
}

#[test]
fn amplitude_damping_coherent_information() {
    let rho = diag(&[0.5, 0.5]);
    for gamma in [0.0, 0.1, 0.25, 0.5, 0.9] {
        let ch: KrausChannel = channel_family(&ChannelFamily::AmplitudeDamping { gamma }).unwrap();
        let ic = channel::coherent_information(&rho, &ch).unwrap();
        let expect = h((1.0 + gamma) / 2.0) - h(gamma / 2.0);
        assert!((ic - expect).abs() < 1e-10, "gamma={gamma}: {ic} vs {expect}");
    }
}

#[test]
fn isotropic_concurrence() {
    for p in [0.0, 0.2, 0.5, 2.0 / 3.0, 0.9] {
        let conc = entmeas::wootters_concurrence(&isotropic(p)).unwrap();
        assert!((conc - (1.0 - 1.5 * p).max(0.0)).abs() < 1e-10, "p={p}: {conc}");
    }
}

#[test]
fn pure_state_concurrence() {
    let amps = [c(0.3, 0.1), c(-0.2, 0.5), c(0.6, 0.0), c(0.1, -0.4)];
    let psi = PureState::normalized(CVector::from_row_slice(&amps), TensorLayout::bipartite(2, 2)).unwrap();
    let v = psi.vector();
    let expect = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
    let conc = entmeas::wootters_concurrence(&psi.density()).unwrap();
    assert!((conc - expect).abs() < 1e-10);
    // for pure states EoF is the entropy of either marginal
    let e = entmeas::wootters_eof(&psi.density()).unwrap();
    let s = qalg::von_neumann_entropy(&psi.density().reduce(&[0]).unwrap());
    assert!((e - s).abs() < 1e-9);
}

#[test]
fn qubit_sic_duals_from_bloch_vectors() {
    let s3 = 3f64.sqrt();
    let bloch = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]].map(|v| v.map(|x| x / s3));
    let projector = |n: [f64; 3]| {
        mat(2, &[c(1.0 + n[2], 0.0), c(n[0], -n[1]), c(n[0], n[1]), c(1.0 - n[2], 0.0)]) * c(0.5, 0.0)
    };
    let povm = icpovm::qubit_tetrahedron_sic::<f64>();
    let dual = icpovm::canonical_dual(&povm).unwrap();
    // each element must match one Bloch projector up to labelling
    for (p, d) in povm.elements().iter().zip(dual.duals()) {
        let pi = bloch.iter().map(|&n| projector(n)).find(|pi| linalg::max_abs(&(pi * c(0.5, 0.0) - p)) < 1e-12);
        let pi = pi.expect("element is a tetrahedron projector over 2");
        let expect = pi * c(3.0, 0.0) - CMatrix::identity(2, 2);
        assert!(linalg::max_abs(&(expect - d)) < 1e-12);
    }
    assert!((dual.k_constant() - 9.0).abs() < 1e-10);
}

/// Weyl-Heisenberg orbit of `(0, 1, -1)/sqrt 2` with its dual frame built from the frame operator.
#[test]
fn qutrit_sic_dual_norm_is_five() {
    let w = C::from_polar(1.0, 2.0 * PI / 3.0);
    let mut shift = CMatrix::zeros(3, 3);
    let mut clock = CMatrix::zeros(3, 3);
    for k in 0..3 {
        shift[((k + 1) % 3, k)] = c(1.0, 0.0);
        clock[(k, k)] = w.powu(k as u32);
    }
    let fid = CVector::from_vec(vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]);
    let mut elems = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let d = shift.pow(a) * clock.pow(b);
            let v = &d * &fid;
            elems.push(v.clone());
        }
    }
    for (i, u) in elems.iter().enumerate() {
        for v in &elems[i + 1..] {
            assert!((u.dotc(v).norm_sqr() - 0.25).abs() < 1e-12);
        }
    }
    let p: Vec<CMatrix<f64>> = elems.iter().map(|v| v * v.adjoint() * c(1.0 / 3.0, 0.0)).collect();
    let vecs: Vec<CVector<f64>> = p.iter().map(|m| CVector::from_column_slice(m.as_slice())).collect();
    let frame = vecs.iter().fold(CMatrix::zeros(9, 9), |acc, v| acc + v * v.adjoint());
    let inv = frame.try_inverse().expect("frame operator is invertible");
    let mut norms = Vec::new();
    for v in &vecs {
        let dv = &inv * v;
        let dual = CMatrix::from_column_slice(3, 3, dv.as_slice());
        norms.push(dual.clone().svd(false, false).singular_values.sum());
    }
    assert!(norms.iter().all(|n| (n - 5.0).abs() < 1e-9), "{norms:?}");

    let lib = icpovm::canonical_dual(&icpovm::sic_povm::<f64>(3).unwrap()).unwrap();
    assert!((lib.k_constant() - 25.0).abs() < 1e-8);
    assert!(lib.trace_norms().iter().all(|n| (n - 5.0).abs() < 1e-9));
}

#[test]
fn covariant_dual_norm_is_two_d_minus_one() {
    for d in 2..=3 {
        let dual = icpovm::canonical_dual(&icpovm::sic_povm::<f64>(d).unwrap()).unwrap();
        for n in dual.trace_norms() {
            assert!((n - (2 * d - 1) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn bell_correlations() {
    let cut = Bipartition::two_party();
    let cc = entmeas::classical_correlations(&bell().density(), &cut, &opts()).unwrap();
    assert!((cc.value - 1.0).abs() < 1e-6);
    let e = entmeas::eof(&bell().density(), &cut, &opts()).unwrap();
    assert!((e.value - 1.0).abs() < 1e-6);
}

#[test]
fn completely_depolarizing_monogamy_residual() {
    let ch: KrausChannel = channel_family(&ChannelFamily::Depolarizing { dim: 2, p: 1.0 }).unwrap();
    let r = entmeas::koashi_winter_residual(&diag(&[0.5, 0.5]), &ch, &opts()).unwrap();
    assert!(r.abs() < 1e-6, "{r}");
}

#[test]
fn bound_functions_at_known_points() {
    let g = bounds::g(0.25f64, 2).unwrap().value().unwrap();
    assert!((g - 3.0).abs() < 1e-12);
    assert!(bounds::g(0.6f64, 2).unwrap().is_vacuous());
    assert_eq!(bounds::g(0.0f64, 2).unwrap().value(), Some(0.0));

    assert!(bounds::theorem1_bound(1.0f64 / 98.0, 2, 2).unwrap().abs() < 1e-12);
    assert!((bounds::theorem1_bound(0.0f64, 2, 2).unwrap() - 1.0).abs() < 1e-15);
    assert!((bounds::theorem2_bound(0.04f64).unwrap() - 0.6).abs() < 1e-12);
    assert!((bounds::sw_direct_from_loss(0.02f64).unwrap() - 0.8).abs() < 1e-12);
    assert!(bounds::theorem2_bound(-0.1f64).is_err());
}
