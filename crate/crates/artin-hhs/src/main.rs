use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = artin_hhs::cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.exit_code)
}
