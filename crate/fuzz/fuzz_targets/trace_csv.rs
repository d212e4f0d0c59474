#![no_main]

use diagopt::trace::{self, TraceRow};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = trace::parse(text) {
        let Some(first) = rows.first() else { return };
        let mut printed = trace::header(first.point.len());
        for row in &rows {
            printed.push('\n');
            printed.push_str(&row.to_line());
        }
        let again: Vec<TraceRow> = trace::parse(&printed).expect("printed trace parses");
        assert_eq!(again.len(), rows.len());
    }
});
