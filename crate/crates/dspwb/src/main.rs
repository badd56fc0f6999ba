use std::process::ExitCode;

fn main() -> ExitCode {
    dspwb::cli::main_entry()
}
