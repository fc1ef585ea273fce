use sic_core::sicpovm::bundled_fiducial;
use sic_core::suite::{run_suite, SuiteOptions};

#[test]
fn bundled_fiducials_pass_every_group() {
    for d in 2..=7 {
        let fid = bundled_fiducial(d).unwrap();
        let rep = run_suite(&fid, &SuiteOptions::default()).unwrap();
        for c in rep.failures() {
            eprintln!(
                "d={d} {} err={:e} tol={:e}",
                c.name, c.max_error, c.tolerance
            );
        }
        assert!(rep.passed(), "d={d}");
    }
}
