#include "plp/datasets.hpp"

#include "plp/hash.hpp"

namespace plp::datasets {

FailureTimes crow_1974()
{
  return FailureTimes({0.7,    3.7,    13.2,   17.6,   54.5,   99.2,   112.2,  120.9,  151.0,  163.0,
                       174.5,  191.6,  282.8,  355.2,  486.3,  490.5,  513.3,  558.4,  678.1,  688.0,
                       785.9,  887.0,  1010.7, 1029.1, 1034.4, 1136.1, 1178.9, 1259.7, 1297.9, 1419.7,
                       1571.7, 1629.8, 1702.4, 1928.9, 2072.3, 2525.2, 2928.5, 3016.4, 3181.0, 3256.3});
}

std::uint64_t dataset_hash(const FailureTimes& data)
{
  return Fnv1a{}.reals(data.values()).value();
}

} // namespace plp::datasets
