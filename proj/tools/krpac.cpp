#include "krpac/cli/commands.hpp"

int main(int argc, char** argv) { return krpac::cli::dispatch(argc, argv); }
