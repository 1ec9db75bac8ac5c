//! Property tests of the discretization and the validation tools.

use neurite_growth::experiment::{default_stationary_growth, run_stationary, StationarySpec};
use neurite_growth::fv::{assemble_diffusion, convective_residual, Grid1D};
use neurite_growth::integrator::{run, StepperConfig};
use neurite_growth::model::presets::{base_params, setup, Preset};
use neurite_growth::model::{
    BoundaryFluxes, Direction, EntryGate, InitialData, ModelFunctions, NeuriteField, Profile,
};
use neurite_growth::scaling::PhysicalScales;
use neurite_growth::stationary::PoolCaps;
use neurite_growth::validation::{total_mass, total_mass_pairwise, BoxMonitor, MassLedger, BOX_TOL};
use proptest::prelude::*;

fn field(n: usize) -> impl Strategy<Value = NeuriteField> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), n).prop_map(|cells| {
        // Scale each cell into the box rho <= 2.
        let (f_plus, f_minus) = cells.iter().map(|(a, b)| (a * (2.0 - 2.0 * b), 2.0 * b * (1.0 - a))).unzip();
        NeuriteField { f_plus, f_minus }
    })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn gates_vanish_at_the_cap(s in 0.0f64..=1.0, cap in 0.5f64..4.0, slope in 0.0f64..5.0, floor in 0.0f64..1.0, shift in 0.0f64..1.0) {
        let (fp, fm) = (s * cap, (1.0 - s) * cap);
        let gates = [
            EntryGate::Vacancy { cap },
            EntryGate::Own { direction: Direction::Antero, cap },
            EntryGate::Own { direction: Direction::Retro, cap },
            EntryGate::RetroSensing { cap, slope, floor, shift },
        ];
        for g in gates {
            prop_assert!(g.eval(fp, fm).abs() <= 1e-12, "{g:?} at ({fp}, {fm})");
        }
    }

    #[test]
    fn diffusion_rows_sum_to_zero(n in 3usize..300) {
        let a = assemble_diffusion(&Grid1D::new(n).unwrap()).unwrap();
        let scale = n as f64;
        for s in a.row_sums() {
            prop_assert!(s.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn convective_fluxes_telescope(
        f in field(40),
        length in 0.1f64..3.0,
        dldt in -1.0f64..1.0,
        b in prop::array::uniform4(0.0f64..2.0),
    ) {
        let p = base_params();
        let grid = Grid1D::new(40).unwrap();
        let bc = BoundaryFluxes { inflow_left: b[0], outflow_left: b[1], outflow_right: b[2], inflow_right: b[3] };
        let r = convective_residual(&f, length, dldt, &bc, &p, &grid);
        let total: f64 = r.plus.iter().chain(&r.minus).sum::<f64>() * grid.h() * length;
        prop_assert!((total - bc.net_into_neurite()).abs() <= 1e-11 * (1.0 + total.abs()));
    }

    #[test]
    fn mass_sums_agree(f1 in field(101), f2 in field(101), pools in prop::array::uniform3(0.0f64..2.0)) {
        let p = base_params();
        let mut state = setup(Preset::ExperimentOne).initial.to_state(101);
        state.fields = [f1, f2];
        state.lambda_som = pools[0];
        state.lambda = [pools[1], pools[2]];
        let grid = Grid1D::new(101).unwrap();
        let a = total_mass(&state, &grid, &p);
        let b = total_mass_pairwise(&state, &grid, &p);
        prop_assert!(rel_close(a, b, 1e-13), "{a} vs {b}");
    }

    #[test]
    fn scaling_round_trip(factors in prop::array::uniform8(0.5f64..2.0)) {
        let mut s = PhysicalScales::paper_2023();
        s.v0 *= factors[0];
        s.d_t *= factors[1];
        s.lambda_rate *= factors[2];
        s.c_inout *= factors[3];
        s.gamma_typ *= factors[4];
        s.h_typ *= factors[5];
        s.c_h *= factors[6];
        s.f_typ *= factors[7];
        s.rho_max *= factors[7];
        let p = s.nondimensionalize().unwrap();
        let r = s.redimensionalize(&p);
        for (got, want) in [
            (r.v0, s.v0), (r.d_t, s.d_t), (r.lambda_rate, s.lambda_rate), (r.c_inout, s.c_inout),
            (r.gamma_typ, s.gamma_typ), (r.h_typ, s.h_typ), (r.c_h, s.c_h), (r.f_typ, s.f_typ),
        ] {
            prop_assert!(rel_close(got, want, 1e-12), "{got} vs {want}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn closed_system_conserves_mass(
        fp in prop::array::uniform2(0.0f64..1.0),
        fm in prop::array::uniform2(0.0f64..1.0),
        lengths in prop::array::uniform2(0.2f64..2.0),
    ) {
        let s = setup(Preset::ExperimentOne);
        let initial = InitialData {
            lengths,
            f_plus: fp.map(Profile::Constant),
            f_minus: fm.map(Profile::Constant),
            ..s.initial
        };
        let cfg = StepperConfig { tau: 1e-3, t_end: 2.0, stationarity_tol: 0.0, sample_stride: 50, ..Default::default() };
        let rec = run(&initial.to_state(41), &cfg, &ModelFunctions::closed(), &s.params, &mut []).unwrap();
        prop_assert!(MassLedger::from_record(&rec).max_relative_residual() <= 1e-12);
    }

    #[test]
    fn experiments_stay_in_the_box(
        two in any::<bool>(),
        fp in prop::array::uniform2(0.0f64..1.0),
        fm in prop::array::uniform2(0.0f64..1.0),
    ) {
        let s = setup(if two { Preset::ExperimentTwo } else { Preset::ExperimentOne });
        let initial = InitialData {
            f_plus: fp.map(Profile::Constant),
            f_minus: fm.map(Profile::Constant),
            ..s.initial
        };
        let cfg = StepperConfig { tau: 1e-4, t_end: 1.0, stationarity_tol: 0.0, ..Default::default() };
        let mut monitor = BoxMonitor::new(s.params.rho_cap, BOX_TOL);
        run(&initial.to_state(51), &cfg, &s.functions, &s.params, &mut [&mut monitor]).unwrap();
        let r = monitor.report();
        prop_assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn constant_states_are_discrete_fixed_points(
        f in 0.01f64..0.5,
        cones in prop::array::uniform2(5.0f64..95.0),
        soma in 5.0f64..95.0,
    ) {
        let spec = StationarySpec {
            f_inf: [f, f],
            lambda_inf: cones,
            lambda_som_inf: soma,
            caps: PoolCaps { soma: 100.0, cone: 100.0 },
            v0: 1.0,
            growth: default_stationary_growth(),
            scaled: Default::default(),
            probe_steps: 0,
            probe_tau: 1e-4,
        };
        let out = run_stationary(&spec).unwrap();
        prop_assert!(out.residual <= 1e-10, "residual {}", out.residual);
    }
}
