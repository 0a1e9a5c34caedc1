#pragma once

#include <string>

#include <json.hpp>

#include "covpanel/arima.hpp"
#include "covpanel/garch.hpp"

namespace covpanel {

// JSON fit records keyed by (ticker, construction) as emitted by the CLI.

inline nlohmann::ordered_json garch_fit_to_json(const std::string& ticker,
                                                const std::string& construction,
                                                const GarchFit& fit) {
    return {{"ticker", ticker},
            {"construction", construction},
            {"mu", fit.mu},
            {"omega", fit.omega},
            {"alpha", fit.alpha},
            {"beta", fit.beta},
            {"loglik", fit.loglik},
            {"n_obs", fit.n_obs},
            {"persistence", fit.persistence},
            {"breakdown", fit.breakdown}};
}

inline nlohmann::ordered_json arima_fit_to_json(const std::string& ticker,
                                                const std::string& construction,
                                                const ArimaFit& fit) {
    return {{"ticker", ticker},
            {"construction", construction},
            {"c", fit.c},
            {"phi", fit.phi},
            {"theta", fit.theta},
            {"sigma2_eps", fit.sigma2_eps},
            {"loglik", fit.loglik},
            {"aic", fit.aic},
            {"bic", fit.bic},
            {"n_obs", fit.n_obs}};
}

}  // namespace covpanel
