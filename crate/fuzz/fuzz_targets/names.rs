#![no_main]

use diagopt::bench::{Method, TableId};
use diagopt::{Estimator, Strategy};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = text.parse::<Method>() {
        assert_eq!(m.label().parse::<Method>().unwrap(), m);
    }
    if let Ok(s) = text.parse::<Strategy>() {
        assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
    }
    if let Ok(e) = text.parse::<Estimator>() {
        assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
    }
    if let Ok(t) = text.parse::<TableId>() {
        assert_eq!(t.name().parse::<TableId>().unwrap(), t);
    }
});
