#include <math.h>
#include <stdio.h>
#include <string.h>

#include "unbox.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    UnboxLexicon *lex = NULL;
    CHECK(unbox_lexicon_bundled(&lex) == UNBOX_STATUS_OK);
    CHECK(unbox_lexicon_len(lex) > 7000);

    UnboxScores s;
    CHECK(unbox_score(lex, "The camera is great and the battery is amazing!", &s) == UNBOX_STATUS_OK);
    CHECK(s.compound > 0.5);
    CHECK(fabs(s.pos + s.neu + s.neg - 1.0) < 1e-9);

    UnboxLabel label;
    CHECK(unbox_label(s.compound, 0.5, &label) == UNBOX_STATUS_OK);
    CHECK(label == UNBOX_LABEL_POSITIVE);

    CHECK(unbox_score(lex, NULL, &s) == UNBOX_STATUS_NULL_POINTER);
    CHECK(unbox_last_error_message() != NULL);
    CHECK(strstr(unbox_last_error_message(), "text") != NULL);
    unbox_lexicon_free(lex);

    UnboxReport r;
    CHECK(unbox_report_from_confusion(211, 209, 75, 579, &r) == UNBOX_STATUS_OK);
    CHECK(fabs(r.accuracy - 790.0 / 1074.0) < 1e-12);
    CHECK(unbox_last_error_message() == NULL);

    size_t train = 0, test = 0;
    CHECK(unbox_split_sizes(5904, 0.8, &train, &test) == UNBOX_STATUS_OK);
    CHECK(train == 4723 && test == 1181);

    printf("ok %s\n", unbox_version());
    return 0;
}
