use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(timeflow::run(std::env::args_os()))
}
