#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "dcd_rtls.h"

static const double H[8] = {0.5, -0.3, 0.2, 0.1, -0.05, 0.02, 0.01, -0.01};

static double uniform(unsigned *s) {
    *s = *s * 1103515245u + 12345u;
    return ((*s >> 8) & 0xffff) / 65536.0 - 0.5;
}

#define CHECK(expr)                                                           \
    do {                                                                      \
        DcdRtlsStatus st_ = (expr);                                           \
        if (st_ != DCD_RTLS_STATUS_OK) {                                      \
            fprintf(stderr, "%s -> %d: %s\n", #expr, st_, dcd_rtls_last_error()); \
            return 1;                                                         \
        }                                                                     \
    } while (0)

int main(void) {
    DcdRtlsConfig cfg = dcd_rtls_config_default();
    cfg.p_exponent = 7;
    DcdRtlsFilter *f = NULL;
    CHECK(dcd_rtls_filter_new(&cfg, &f));
    if (dcd_rtls_filter_order(f) != 8) return 2;

    unsigned seed = 7;
    double x[8], w[8];
    for (int n = 0; n < 4000; n++) {
        double y = 0.0;
        for (int i = 0; i < 8; i++) {
            x[i] = 3.0 * uniform(&seed);
            y += H[i] * x[i];
        }
        CHECK(dcd_rtls_filter_step(f, x, 8, y));
    }
    CHECK(dcd_rtls_filter_weights(f, w, 8));
    double err = 0.0;
    for (int i = 0; i < 8; i++) err += (w[i] - H[i]) * (w[i] - H[i]);
    if (err > 1e-4) {
        fprintf(stderr, "misadjustment %g\n", err);
        return 3;
    }

    if (dcd_rtls_filter_weights(f, w, 3) != DCD_RTLS_STATUS_INVALID_ARGUMENT) return 4;
    if (dcd_rtls_filter_step(NULL, x, 8, 0.0) != DCD_RTLS_STATUS_NULL_POINTER) return 5;
    dcd_rtls_filter_free(f);

    cfg.gamma = -1.0;
    if (dcd_rtls_filter_new(&cfg, &f) != DCD_RTLS_STATUS_CONFIG) return 6;

    DcdRtlsOpCounts ops;
    CHECK(dcd_rtls_predicted_ops(DCD_RTLS_ALGO_DCD_RTLS, 8, 1, 16, true, &ops));
    if (ops.mul != 82 || ops.div != 1 || ops.sqrt != 0) return 7;

    double lam = dcd_rtls_stability_lambda_bound(8.0, 1.0, 1.0, 0.0);
    if (fabs(lam - 0.8) > 1e-15) return 8;

    printf("ok %.3e\n", err);
    return 0;
}
