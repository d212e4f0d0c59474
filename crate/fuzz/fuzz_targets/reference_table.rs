#![no_main]

use diagopt::reference::ReferenceTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = ReferenceTable::parse(text) {
        for r in &table.records {
            assert!(r.id > 0 && r.n > 0 && r.minimizer.len() == r.n);
        }
        let again = ReferenceTable::parse(&table.to_text("fuzz")).expect("printed table parses");
        assert_eq!(again, table);
    }
});
