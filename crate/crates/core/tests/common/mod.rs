#![allow(dead_code)]

use sic_core::adjoint::{adjoint_bundle, AdjointBundle};
use sic_core::sicpovm::{bundled_fiducial, sic_from_fiducial, Fiducial, SicSet};
use sic_core::tensors::{triple_products, TripleTensors};

pub fn fid(d: usize) -> Fiducial {
    bundled_fiducial(d).unwrap()
}

pub fn sic(d: usize) -> SicSet {
    sic_from_fiducial(&fid(d)).unwrap()
}

pub fn trip(d: usize) -> TripleTensors {
    triple_products(&sic(d))
}

pub fn bundle(d: usize) -> AdjointBundle {
    adjoint_bundle(&trip(d))
}

pub fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() < tol, "{a} vs {b} (tol {tol})");
}
