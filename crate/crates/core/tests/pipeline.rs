use kdc_core::check::check_result;
use kdc_core::instances::{generate, instance_digest, GenParams, InstanceClass, InstanceFile, InstanceMeta};
use kdc_core::kinetic::Flags;
use kdc_core::minmax::{solve_minmax, SolverConfig};
use kdc_core::registry::Registry;
use kdc_core::result_file::ResultFile;

fn params(class: InstanceClass, seed: u64) -> GenParams {
    GenParams { n: 8, m: 3, seed, class, ..GenParams::default() }
}

#[test]
fn generate_store_solve_check() {
    let reg = Registry::builtin();
    for class in [InstanceClass::Random, InstanceClass::SameSlope, InstanceClass::SameStart, InstanceClass::SameEnd] {
        let p = params(class, 21);
        let inst = generate(&p).unwrap();
        let text = InstanceFile::new(&inst, InstanceMeta { id: "x".into(), class, seed: 21, params: Some(p), notes: vec![] }).to_json();
        let inst = InstanceFile::parse(&text).unwrap().instance().unwrap();
        for algo in reg.algorithm_names() {
            for exact in [false, true] {
                let config = SolverConfig { flags: Flags::ALL, exact_arithmetic: exact, ..SolverConfig::default() };
                let r = reg.solve(algo, &inst, &config).unwrap();
                let file = ResultFile::new(&r, algo, &config, "x", &instance_digest(&inst));
                let back = ResultFile::parse(&file.to_json()).unwrap();
                let rep = check_result(&back, &inst, 500).unwrap();
                assert!(rep.passed, "{class} {algo} exact={exact}: {:?}", rep.failure);
            }
        }
    }
}

#[test]
fn exact_and_float_agree() {
    for seed in 0..3 {
        let inst = generate(&params(InstanceClass::Random, seed)).unwrap();
        let base = SolverConfig { target_gap: 0.0, ..SolverConfig::default() };
        let f = solve_minmax(&inst, &base).unwrap().upper.to_f64();
        let e = solve_minmax(&inst, &SolverConfig { exact_arithmetic: true, ..base }).unwrap().upper.to_f64();
        assert!((f - e).abs() <= 1e-9 * e, "seed {seed}: float {f} exact {e}");
    }
}
