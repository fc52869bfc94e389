#include <stdio.h>
#include "krein_frames.h"

int main(void) {
    double j[] = {1, 0, 0, 0, 0, 0, -1, 0};
    KfSpace *space = NULL;
    if (kf_space_new(j, 2, &space) != KF_STATUS_OK) return 1;
    KfFamily *family = NULL;
    kf_family_new(space, &family);
    double e1[] = {1, 0, 0, 0};
    double e2[] = {0, 0, 1, 0};
    if (kf_family_add(family, e1, 1, 2.0) != KF_STATUS_OK) return 2;
    if (kf_family_add(family, e2, 1, 3.0) != KF_STATUS_OK) return 3;
    double neutral[] = {1, 0, 1, 0};
    if (kf_family_add(family, neutral, 1, 1.0) != KF_STATUS_MEMBER_CLASSIFICATION) return 4;
    if (kf_last_error_message() == NULL) return 5;
    KfCertificate *cert = NULL;
    if (kf_family_certify(family, &cert) != KF_STATUS_OK) return 6;
    bool is_frame = false;
    kf_certificate_is_frame(cert, &is_frame);
    double b[4];
    kf_certificate_optimal_bounds(cert, b);
    printf("%d %g %g %g %g\n", is_frame, b[0], b[1], b[2], b[3]);
    kf_certificate_free(cert);
    kf_family_free(family);
    kf_space_free(space);
    return is_frame ? 0 : 7;
}
