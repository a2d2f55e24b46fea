#ifndef LID_LID_HPP_
#define LID_LID_HPP_

#include "lid/evaluation.hpp"
#include "lid/lexicon.hpp"
#include "lid/report.hpp"
#include "lid/scorer.hpp"
#include "lid/text_normalizer.hpp"
#include "lid/utf8.hpp"

#endif  // LID_LID_HPP_
