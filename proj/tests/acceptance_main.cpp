#include <chrono>
#include <cstdio>
#include <string>

#include "wnev/acceptance.hpp"

int main(int argc, char** argv) {
    wnev::acceptance::context ctx;
    ctx.data_dir = argc > 1 ? argv[1] : WNEV_DATA_DIR;
    std::string suite = argc > 2 ? argv[2] : "";
    int failed = 0;
    for (const auto& r : wnev::acceptance::run(suite, ctx)) {
        std::printf("%s\n", wnev::acceptance::line(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
