use sic_core::sicpovm::{fiducial_search, format_fiducial, overlap_residual, SearchOptions};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    for d in 2..=7 {
        let opts = SearchOptions {
            target: 1e-14,
            restarts: 200,
            ..SearchOptions::default()
        };
        let t = std::time::Instant::now();
        let fid = fiducial_search(d, 42, &opts).expect("search");
        eprintln!(
            "d={d} residual={:e} in {:?}",
            overlap_residual(fid.components()),
            t.elapsed()
        );
        std::fs::write(format!("{dir}/fid_d{d}.txt"), format_fiducial(&fid)).unwrap();
    }
}
