#include <stdio.h>
#include <string.h>

#include "bipareto.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);   \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const int64_t p[] = {2, 3, 4};
    const int64_t q[] = {5, 4, 1};
    BpInstance *inst = NULL;
    CHECK(bipareto_instance_new(p, q, 3, &inst) == BP_STATUS_OK);

    BpSolution *exact = NULL;
    BpSolution *approx = NULL;
    CHECK(bipareto_solve_exact(inst, 0, &exact) == BP_STATUS_OK);
    CHECK(bipareto_solve_fptas(inst, 3, 10, 0, &approx) == BP_STATUS_OK);
    CHECK(bipareto_solution_len(exact) == 2);

    int64_t c = 0, l = 0;
    CHECK(bipareto_solution_point(exact, 1, &c, &l) == BP_STATUS_OK);
    CHECK(c == 6 && l == 7);
    uint8_t m = 0;
    CHECK(bipareto_solution_machine(exact, 1, 2, &m) == BP_STATUS_OK);
    CHECK(m == 2);
    CHECK(bipareto_solution_point(exact, 5, &c, &l) == BP_STATUS_OUT_OF_RANGE);
    CHECK(bipareto_last_error() != NULL);

    bool covered = false;
    CHECK(bipareto_coverage_check(exact, approx, 3, 10, &covered) == BP_STATUS_OK);
    CHECK(covered);

    BpSolution *none = NULL;
    CHECK(bipareto_solve_exact(inst, 2, &none) == BP_STATUS_BUDGET_EXCEEDED);
    CHECK(none == NULL);
    CHECK(strcmp(bipareto_status_message(BP_STATUS_BUDGET_EXCEEDED), "state budget exceeded") == 0);

    printf("bipareto %s: front (5, 9) (6, 7)\n", bipareto_version());
    bipareto_solution_free(exact);
    bipareto_solution_free(approx);
    bipareto_instance_free(inst);
    return 0;
}
