#include <stdio.h>
#include <string.h>
#include "qhcat.h"

int main(void) {
    QhcatCategory *cat = NULL;
    if (qhcat_category_family("za-inf-inf", NULL, 3, "fp:32003", &cat) != QHCAT_STATUS_OK) {
        fprintf(stderr, "family: %s\n", qhcat_last_error());
        return 1;
    }
    size_t x = 0, d = 0;
    if (qhcat_category_find(cat, "E2_1", &x) != QHCAT_STATUS_OK) return 2;
    if (qhcat_hom_dim(cat, x, x, &d) != QHCAT_STATUS_OK || d != 1) return 3;
    QhcatCertificate *cert = NULL;
    if (qhcat_check_qh(cat, &cert) != QHCAT_STATUS_OK) return 4;
    char *report = qhcat_certificate_report(cert);
    int ok = qhcat_certificate_passed(cert) && strstr(report, "[PASS]") != NULL;
    printf("objects %zu layers %zu passed %d\n", qhcat_category_object_count(cat),
           qhcat_category_layer_count(cat), ok);
    qhcat_string_free(report);
    qhcat_certificate_free(cert);
    qhcat_category_free(cat);
    if (qhcat_category_family("nope", NULL, 3, NULL, &cat) != QHCAT_STATUS_INVALID) return 5;
    return ok ? 0 : 6;
}
