#![no_main]

use cluster_dt::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(report) = Report::from_json(s) else {
        return;
    };
    let json = report.to_json().unwrap();
    assert_eq!(Report::from_json(&json).unwrap(), report);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    let _ = report.render_table();
});
