#ifndef TEXMETA_TEXMETA_HPP
#define TEXMETA_TEXMETA_HPP

#include "texmeta/diagnostic.hpp"
#include "texmeta/utf8.hpp"
#include "texmeta/textex.hpp"
#include "texmeta/model.hpp"
#include "texmeta/metafile.hpp"
#include "texmeta/emit_config.hpp"
#include "texmeta/json.hpp"
#include "texmeta/crossref.hpp"
#include "texmeta/jats.hpp"
#include "texmeta/xmp.hpp"
#include "texmeta/registry.hpp"
#include "texmeta/config.hpp"
#include "texmeta/cli.hpp"

#endif
