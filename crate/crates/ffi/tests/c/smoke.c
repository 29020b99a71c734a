#include <math.h>
#include <stdio.h>
#include "pafit.h"

int main(void) {
    double r = 0.0;
    if (pafit_radius_from_b(0.85e-3, 58.17358, &r) != PAFIT_STATUS_OK || fabs(r - 34.9) > 0.1) {
        return 1;
    }
    if (pafit_radius_from_b(-1.0, 58.17358, &r) != PAFIT_STATUS_INVALID_ARGUMENT) {
        return 2;
    }
    if (pafit_last_error_message() == NULL) {
        return 3;
    }
    PafitDataset *ds = NULL;
    if (pafit_dataset_bundled(&ds) != PAFIT_STATUS_OK) {
        return 4;
    }
    size_t n = 0;
    pafit_dataset_len(ds, &n);
    pafit_dataset_free(ds);
    printf("rows=%zu r=%.3f\n", n, r);
    return n == 20 ? 0 : 5;
}
