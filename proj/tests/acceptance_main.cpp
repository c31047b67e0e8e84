#include <wolffcap/acceptance.hpp>

int main() {
    auto results = wolffcap::acceptance::run_all();
    return wolffcap::acceptance::report(results, stdout);
}
