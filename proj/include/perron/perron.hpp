#ifndef PERRON_PERRON_HPP
#define PERRON_PERRON_HPP

#include "perron/app.hpp"
#include "perron/core.hpp"
#include "perron/corpus.hpp"
#include "perron/error.hpp"
#include "perron/montecarlo.hpp"
#include "perron/oracle.hpp"
#include "perron/rng.hpp"
#include "perron/series.hpp"

#endif // PERRON_PERRON_HPP
