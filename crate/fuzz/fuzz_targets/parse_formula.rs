#![no_main]

use libfuzzer_sys::fuzz_target;

use kripkemv_core::parse::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Must never panic; on success, rendering must round-trip.
    if let Ok(formula) = parse(text) {
        let rendered = formula.render();
        let reparsed = parse(&rendered).expect("rendered formula parses");
        assert_eq!(reparsed, formula, "round trip changed the formula");
    }
});
