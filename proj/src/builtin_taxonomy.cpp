#include <sstream>

#include "ontoport/ontology.hpp"

namespace ontoport {

// Default action taxonomy: 55 Moodle low-level actions grouped into the four
// event categories (15 learning, 15 communicating, 11 working, 14
// evaluating). The engagement attribute is derived from interaction totals
// and days connected, so it has no action rows here.
static constexpr std::string_view kBuiltinTaxonomy = R"(# ontoport default action taxonomy
# format: <action name> = <LEARNING|COMMUNICATING|WORKING|EVALUATING>
# engagement is computed from total interactions and days connected, not mapped actions

blog view = LEARNING
book view all = LEARNING
course enrol = LEARNING
course recent = LEARNING
course user report = LEARNING
course view = LEARNING
folder view = LEARNING
folder view all = LEARNING
imscp view all = LEARNING
page view = LEARNING
page view all = LEARNING
resource view = LEARNING
resource view all = LEARNING
url view = LEARNING
url view all = LEARNING

forum add discussion = COMMUNICATING
forum add post = COMMUNICATING
forum search = COMMUNICATING
forum subscribe = COMMUNICATING
forum subscribe all = COMMUNICATING
forum update = COMMUNICATING
forum update post = COMMUNICATING
forum user report = COMMUNICATING
forum view discussion = COMMUNICATING
forum view forum = COMMUNICATING
forum view forums = COMMUNICATING
wiki edit = COMMUNICATING
wiki update = COMMUNICATING
wiki view = COMMUNICATING
wiki view all = COMMUNICATING

assignment upload = WORKING
assignment view = WORKING
assignment view all = WORKING
assignment view submission = WORKING
choice choose = WORKING
choice choose again = WORKING
choice view = WORKING
choice view all = WORKING
teamwork update = WORKING
teamwork view = WORKING
teamwork view all = WORKING

hotpot submit = EVALUATING
hotpot view = EVALUATING
hotpot view all = EVALUATING
questionnaire submit = EVALUATING
questionnaire update = EVALUATING
questionnaire view = EVALUATING
questionnaire view all = EVALUATING
quiz attempt = EVALUATING
quiz close attempt = EVALUATING
quiz continue attempt = EVALUATING
quiz preview = EVALUATING
quiz review = EVALUATING
quiz view = EVALUATING
quiz view all = EVALUATING
)";

std::string_view ActionTaxonomy::builtin_text() { return kBuiltinTaxonomy; }

const ActionTaxonomy& ActionTaxonomy::builtin() {
    static const ActionTaxonomy taxonomy = [] {
        std::istringstream in{std::string(kBuiltinTaxonomy)};
        return load_taxonomy(in);
    }();
    return taxonomy;
}

}  // namespace ontoport
