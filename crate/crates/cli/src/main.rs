fn main() {
    let status = toeplitz_trace_cli::main_with_args(std::env::args_os());
    std::process::exit(status as i32);
}
