#include <ar1bayes/cli.hpp>

int main(int argc, char** argv) { return ar1bayes::cli::run(argc, argv); }
