#![no_main]

use cluster_dt::{cartan_matrix, CartanType};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(kind) = s.parse::<CartanType>() else {
        return;
    };
    // A parsed type prints back to itself and always has a Cartan matrix.
    assert_eq!(kind.to_string().parse::<CartanType>().unwrap(), kind);
    let spec = cartan_matrix(kind).unwrap();
    assert_eq!(spec.rank(), kind.rank);
});
