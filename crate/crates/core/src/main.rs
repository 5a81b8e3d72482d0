use std::io::{stderr, stdout};

fn main() {
    let code = nilfix::cli::parse_and_dispatch(std::env::args_os(), &mut stdout(), &mut stderr());
    std::process::exit(code);
}
