fn main() -> std::process::ExitCode {
    willmore_cli::main_with_args(std::env::args_os())
}
