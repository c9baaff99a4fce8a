macro_rules! example_test {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(alpha, "alpha.rs", alpha_example_runs);
example_test!(verify, "verify.rs", verify_example_runs);
example_test!(solve_example1, "solve_example1.rs", solve_example1_runs);
example_test!(dt_sweep, "dt_sweep.rs", dt_sweep_example_runs);
example_test!(extinction, "extinction.rs", extinction_example_runs);
example_test!(classical_cn, "classical_cn.rs", classical_cn_example_runs);
example_test!(custom_problem, "custom_problem.rs", custom_problem_example_runs);
example_test!(h_sweep, "h_sweep.rs", h_sweep_example_runs);
