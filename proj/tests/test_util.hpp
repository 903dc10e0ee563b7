#pragma once

#include "artinperv/intmat.hpp"

#include <random>
#include <vector>

namespace tutil {

inline artinperv::ZMat from_rows(const std::vector<std::vector<long>>& rows) {
    long r = static_cast<long>(rows.size());
    long c = r ? static_cast<long>(rows[0].size()) : 0;
    artinperv::ZMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j)
            m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

inline artinperv::QMat q_from_rows(const std::vector<std::vector<long>>& rows) {
    return artinperv::q_from_z(from_rows(rows));
}

inline artinperv::ZMat random_zmat(std::mt19937_64& rng, long r, long c, long bound) {
    std::uniform_int_distribution<long> val(-bound, bound);
    artinperv::ZMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m.at(i, j) = val(rng);
    return m;
}

} // namespace tutil
