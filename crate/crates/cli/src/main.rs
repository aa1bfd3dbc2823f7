use std::io::{Read, Write};

fn main() {
    let outcome = verlag_cli::execute(std::env::args_os(), || {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).expect("readable stdin");
        text
    });
    std::io::stdout().write_all(outcome.stdout.as_bytes()).expect("stdout");
    std::io::stderr().write_all(outcome.stderr.as_bytes()).expect("stderr");
    std::process::exit(outcome.code);
}
