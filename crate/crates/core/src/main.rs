use std::io;

fn main() {
    let code = bs3_lambda::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
