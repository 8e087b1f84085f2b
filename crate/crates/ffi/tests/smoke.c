#include <stdio.h>
#include <string.h>

#include "streamlearn.h"

#define CHECK(call)                                                     \
    do {                                                                \
        SlStatus s_ = (call);                                           \
        if (s_ != SL_STATUS_OK) {                                       \
            printf("%s failed (%d): %s\n", #call, (int)s_,              \
                   sl_last_error_message());                            \
            return 1;                                                   \
        }                                                               \
    } while (0)

int main(void) {
    SlStream *stream = NULL;
    SlModel *model = NULL;
    size_t n_features = 0, n_targets = 0, classes[1];
    double x[3], proba[2];
    size_t y[1], label[1];
    bool produced = false;

    CHECK(sl_stream_new("sea", "{\"noise_fraction\": 0.0}", 1, &stream));
    CHECK(sl_stream_shape(stream, &n_features, &n_targets));
    if (n_features != 3 || n_targets != 1) {
        printf("unexpected shape\n");
        return 1;
    }
    CHECK(sl_stream_cardinality(stream, classes, 1));
    CHECK(sl_model_new("naive_bayes", NULL, 1, &model));
    for (int i = 0; i < 500; i++) {
        CHECK(sl_stream_next(stream, x, 3, y, 1, &produced));
        CHECK(sl_model_partial_fit(model, x, y, 1, 3, 1, classes));
    }
    CHECK(sl_model_predict(model, x, 3, label, 1));
    CHECK(sl_model_predict_proba(model, x, 3, 0, proba, 2));

    if (sl_model_new("foo", NULL, 1, &model) != SL_STATUS_CONFIG ||
        strstr(sl_last_error_message(), "foo") == NULL) {
        printf("expected a config error\n");
        return 1;
    }
    sl_model_free(model);
    sl_stream_free(stream);
    printf("ok\n");
    return 0;
}
