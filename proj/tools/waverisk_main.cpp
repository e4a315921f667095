#include "waverisk/cli.hpp"

int main(int argc, char** argv) { return waverisk::cli_main(argc, argv); }
