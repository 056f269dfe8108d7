use std::io::{stderr, stdout};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let code = depthdist::dispatch(&argv, &mut stdout(), &mut stderr());
    std::process::exit(code);
}
