#pragma once

namespace mlrelax {

/// sin(pi*x) with argument reduction on the double lattice, accurate for
/// large |x| where sin(M_PI*x) loses the phase.
double sinpi(double x);

/// Sign and log-magnitude of Gamma(z). At the poles (z = 0, -1, -2, ...)
/// sign is 0 and log_abs is +infinity.
struct SignedLogGamma {
  double log_abs;
  int sign;
};
SignedLogGamma log_gamma_signed(double z);

/// Extended-precision variant: series terms are formed as exp(sum of logs),
/// so the log error is what bounds the achievable accuracy at large term
/// humps; 80-bit logs buy roughly three extra digits there.
struct SignedLogGammaL {
  long double log_abs;
  int sign;
};
SignedLogGammaL log_gamma_signed_l(double z);

/// 1/Gamma(z) as an entire function: exactly zero at the non-positive
/// integers. This is what makes series terms with Gamma poles vanish
/// cleanly instead of producing NaNs.
double rgamma(double z);

/// Rising factorial (x)_n = Gamma(x+n)/Gamma(x). Negative-integer x
/// truncates; negative non-integer x goes through the signed Gamma ratio
/// so the sign survives the reflection formula.
double pochhammer(double x, int n);

/// Binomial coefficient as a double; exact for the small orders used here.
double binomial(int n, int k);

}  // namespace mlrelax
