use aqec::channel::{self, channel_family, ChannelFamily};
use aqec::entmeas;
use aqec::icpovm;
use aqec::qalg::{self, TensorLayout};
use aqec::recovery::{verify_instance, VerifyOptions};
use aqec::{DensityMatrixF32, DensityMatrixF64, KrausChannelF32, KrausChannelF64, PovmF32};

const TOL: f64 = 1e-4;

fn close(a: f32, b: f64, what: &str) {
    assert!((a as f64 - b).abs() <= TOL, "{what}: f32 {a} vs f64 {b}");
}

fn input<T: aqec::Real>(probs: &[T]) -> aqec::qalg::DensityMatrix<T> {
    aqec::qalg::DensityMatrix::diagonal(probs, TensorLayout::single(probs.len())).unwrap()
}

fn families() -> Vec<ChannelFamily> {
    vec![
        ChannelFamily::Depolarizing { dim: 2, p: 0.15 },
        ChannelFamily::AmplitudeDamping { gamma: 0.3 },
        ChannelFamily::PhaseDamping { lambda: 0.2 },
        ChannelFamily::RandomRankK { in_dim: 2, out_dim: 2, k: 3, seed: 9 },
    ]
}

#[test]
fn entropies_and_fidelities_agree() {
    let r32: DensityMatrixF32 = input(&[0.7f32, 0.3]);
    let r64: DensityMatrixF64 = input(&[0.7f64, 0.3]);
    close(qalg::von_neumann_entropy(&r32), qalg::von_neumann_entropy(&r64), "entropy");
    for fam in families() {
        let c32: KrausChannelF32 = channel_family(&fam).unwrap();
        let c64: KrausChannelF64 = channel_family(&fam).unwrap();
        close(
            channel::coherent_information(&r32, &c32).unwrap(),
            channel::coherent_information(&r64, &c64).unwrap(),
            &format!("{fam} coherent information"),
        );
        close(
            channel::entanglement_fidelity(&r32, &c32).unwrap(),
            channel::entanglement_fidelity(&r64, &c64).unwrap(),
            &format!("{fam} fidelity"),
        );
        let t32 = channel::global_state(&r32, &c32).unwrap();
        let t64 = channel::global_state(&r64, &c64).unwrap();
        close(
            entmeas::wootters_eof(&t32.rho_rq).unwrap(),
            entmeas::wootters_eof(&t64.rho_rq).unwrap(),
            &format!("{fam} wootters"),
        );
    }
}

#[test]
fn frame_constants_agree() {
    let sic: PovmF32 = icpovm::qubit_tetrahedron_sic();
    let k = icpovm::canonical_dual(&sic).unwrap().k_constant();
    close(k, 9.0, "qubit sic K");
    let mub: PovmF32 = icpovm::mub_povm(3).unwrap();
    let dual = icpovm::canonical_dual(&mub).unwrap();
    let k64 = icpovm::canonical_dual(&icpovm::mub_povm::<f64>(3).unwrap()).unwrap().k_constant();
    assert!(((dual.k_constant() as f64) - k64).abs() <= 1e-4 * k64);
}

#[test]
fn full_report_agrees() {
    let fam = ChannelFamily::Depolarizing { dim: 2, p: 0.1 };
    let c32: KrausChannelF32 = channel_family(&fam).unwrap();
    let c64: KrausChannelF64 = channel_family(&fam).unwrap();
    let r32: DensityMatrixF32 = input(&[0.5f32, 0.5]);
    let r64: DensityMatrixF64 = input(&[0.5f64, 0.5]);
    let a = verify_instance(&r32, &c32, &VerifyOptions::with_seed(3)).unwrap();
    let b = verify_instance(&r64, &c64, &VerifyOptions::with_seed(3)).unwrap();
    for (name, x, y) in [
        ("input_entropy", a.input_entropy, b.input_entropy),
        ("coherent_information", a.coherent_information, b.coherent_information),
        ("eof", a.eof, b.eof),
        ("f_petz", a.f_petz, b.f_petz),
        ("f_opt", a.f_opt, b.f_opt),
        ("sw_direct", a.sw_direct, b.sw_direct),
        ("thm2", a.thm2, b.thm2),
    ] {
        assert!((x - y).abs() <= 1e-3, "{name}: {x} vs {y}");
    }
    assert!(a.violations().is_empty(), "{:?}", a.violations());
}
