#include "majorana/acceptance.hpp"

#include <iostream>

int main() { return majorana::acceptance::run_all(std::cout) ? 0 : 1; }
