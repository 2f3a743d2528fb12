#include "orlimink/cli.hpp"

int main(int argc, char** argv) { return orlimink::run(argc, argv); }
