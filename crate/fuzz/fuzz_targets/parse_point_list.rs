#![no_main]

use cluster_dt::dtmap::parse_point_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = parse_point_list(s) else {
        return;
    };
    assert!(!v.is_empty());
    assert!(v.iter().all(|x| x.is_finite() && *x > 0.0));
    let text = v
        .iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",");
    assert_eq!(parse_point_list(&text).unwrap(), v);
});
