fn main() -> std::process::ExitCode {
    wigner_phase::cli::main_with_args(std::env::args_os())
}
