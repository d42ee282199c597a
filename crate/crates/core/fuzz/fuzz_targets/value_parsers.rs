#![no_main]

use libfuzzer_sys::fuzz_target;
use qcnoise::noise::CouplingModel;
use qcnoise::quadrature::QuadratureRule;
use qcnoise::scan::{EventKind, MatrixElement, SweepAxis};

fuzz_target!(|data: &str| {
    if let Ok(e) = data.parse::<MatrixElement>() {
        assert!((1..=4).contains(&e.row()) && (1..=4).contains(&e.col()));
        assert_eq!(e.to_string().parse::<MatrixElement>().unwrap(), e);
    }
    let _ = data.parse::<SweepAxis>();
    let _ = data.parse::<QuadratureRule>();
    let _ = data.parse::<CouplingModel>();
    let _ = data.parse::<EventKind>();
});
