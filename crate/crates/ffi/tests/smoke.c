#include <math.h>
#include <stdio.h>
#include <string.h>

#include "eomconv.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const double k = 0.5;
    EomCoupling *coupling = NULL;
    CHECK(eom_coupling_from_ratio(k, 1.0, &coupling) == EOM_STATUS_OK);

    double t = 0.0;
    CHECK(eom_dark_times(coupling, 1, &t) == EOM_STATUS_OK);
    EomCoefficients c;
    CHECK(eom_propagator_closed(coupling, t, &c) == EOM_STATUS_OK);
    CHECK(fabs(c.f[0].re + 1.0) < 1e-12);
    CHECK(fabs(c.g[1].re - 2.0 * k / (1.0 - k * k)) < 1e-12);

    double rate = 0.0;
    CHECK(eom_cqc_rate(k, &rate) == EOM_STATUS_OK);
    CHECK(fabs(rate - 4.0 * k * k / pow(1.0 - k * k, 2)) < 1e-12);

    EomCoupling *bad = NULL;
    CHECK(eom_coupling_new(3.0, 1.0, &bad) == EOM_STATUS_UNSUPPORTED_REGIME);
    CHECK(bad == NULL);
    CHECK(strlen(eom_last_error_message()) > 0);

    eom_coupling_free(coupling);
    printf("eomconv %s ok\n", eom_version());
    return 0;
}
