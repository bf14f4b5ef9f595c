//! Declared keys of every subcommand. Each key is accepted as `--key VALUE`
//! on the command line and as `key=value` in a config file.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Key {
    pub name: &'static str,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key {
        name,
        default: Some(default),
        help,
    }
}

const fn opt(name: &'static str, help: &'static str) -> Key {
    Key {
        name,
        default: None,
        help,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    /// Output formats; the first is the default.
    pub formats: &'static [&'static str],
    pub keys: &'static [Key],
}

const IMAGE: &[&str] = &["ppm", "png", "csv", "json"];
const REPORT: &[&str] = &["json"];
const TABLE: &[&str] = &["json", "csv"];

const PALETTE: Key = opt("palette", "palette file, 256 lines of `r g b`");

impl CommandSpec {
    /// Own keys followed by the common ones.
    pub fn keys(&self) -> Vec<Key> {
        let mut keys = self.keys.to_vec();
        keys.push(opt("out", "output path"));
        keys.push(Key {
            name: "format",
            default: Some(self.formats[0]),
            help: "output format",
        });
        keys.push(key("threads", "0", "worker threads, 0 for all cores"));
        keys.push(key("seed", "0", "seed for randomized sampling"));
        keys
    }

    pub fn declares(&self, name: &str) -> bool {
        self.keys().iter().any(|k| k.name == name)
    }

    pub fn default_of(&self, name: &str) -> Option<&'static str> {
        self.keys()
            .into_iter()
            .find(|k| k.name == name)
            .and_then(|k| k.default)
    }
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "julia",
        about: "Julia set of a polynomial or rational map",
        formats: IMAGE,
        keys: &[
            key(
                "poly",
                "basilica",
                "preset name or polynomial file (one `re,im` per line, ascending degree)",
            ),
            opt("den", "denominator polynomial file; makes the map rational"),
            key("window", "0,0,4,4", "cx,cy,width,height"),
            key("size", "512x512", "COLSxROWS"),
            key("max-iter", "500", "iteration cap"),
            key("method", "escape", "escape | inverse"),
            key("depth", "14", "preimage depth for the inverse method"),
            key("budget", "20000", "point budget for the inverse method"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "mandel",
        about: "Mandelbrot set of z^2 + c",
        formats: IMAGE,
        keys: &[
            key("window", "-0.5,0,3,3", "cx,cy,width,height"),
            key("size", "512x512", "COLSxROWS"),
            key("max-iter", "500", "iteration cap"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "tricorn",
        about: "connectedness locus of conj(z)^2 + c",
        formats: IMAGE,
        keys: &[
            key("window", "0,0,4,4", "cx,cy,width,height"),
            key("size", "512x512", "COLSxROWS"),
            key("max-iter", "500", "iteration cap"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "cubic-u",
        about: "parameter plane of the cubic family with a fixed point of multiplier lambda at 0",
        formats: IMAGE,
        keys: &[
            key("window", "0,0,3,3", "cx,cy,width,height in lambda"),
            key("size", "512x512", "COLSxROWS"),
            key("max-iter", "500", "iteration cap"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "ray",
        about: "external ray of a monic polynomial with connected Julia set",
        formats: TABLE,
        keys: &[
            key("poly", "basilica", "preset name or polynomial file"),
            key("angle", "1/3", "rational angle p/q"),
            key("levels", "4", "potential levels per halving"),
            key("halvings", "60", "halvings below the starting potential"),
        ],
    },
    CommandSpec {
        name: "coding-tree",
        about: "geometric coding tree and one branch limit",
        formats: TABLE,
        keys: &[
            key("poly", "basilica", "preset name or polynomial file"),
            opt("den", "denominator polynomial file"),
            key("root", "0,3", "base point re,im"),
            key("depth", "8", "tree depth"),
            key(
                "word",
                "0",
                "symbols repeated periodically along the branch",
            ),
            key("branch-depth", "40", "branch depth"),
            key("tolerance", "1e-6", "tail diameter counted as converged"),
        ],
    },
    CommandSpec {
        name: "thurston-interval",
        about: "pullback iteration for a piecewise-monotone interval map",
        formats: REPORT,
        keys: &[
            key(
                "map",
                "tent",
                "preset (tent, three-lap) or file of breakpoint/value pairs",
            ),
            key("steps", "20", "maximum number of steps"),
            key("tol", "1e-6", "stop once sup |h_n - id| is below this"),
            opt("plot", "PPM overlay of f_0, f_1 and f_9"),
        ],
    },
    CommandSpec {
        name: "siegel",
        about: "coefficients of h'/(1-h) for the P_rho family",
        formats: &["csv", "json"],
        keys: &[
            key("theta", "golden", "golden or a decimal rotation number"),
            key("rho", "1,0", "exponent re,im"),
            key("order", "200", "truncation order"),
            key(
                "a0",
                "default",
                "default (1/(1+rho/2)), normalized (h(1) = 1) or re,im",
            ),
            key(
                "imaginary-cot",
                "true",
                "keep the cotangent term of the weights",
            ),
            key(
                "linearizer-order",
                "256",
                "order of the linearizer for the dual check and normalization",
            ),
        ],
    },
    CommandSpec {
        name: "newton-basins",
        about: "basins of the relaxed Newton map",
        formats: IMAGE,
        keys: &[
            key("poly", "bad-cubic", "preset name or polynomial file"),
            key("h", "1", "relaxation parameter"),
            key("window", "0,0,4,4", "cx,cy,width,height"),
            key("size", "512x512", "COLSxROWS"),
            key("max-iter", "200", "iteration cap"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "newton-flow",
        about: "trajectory of the Newton flow",
        formats: &["csv", "json"],
        keys: &[
            key("poly", "cube-roots", "preset name or polynomial file"),
            key("z0", "1,1", "start re,im"),
            key("field", "raw", "raw or desing"),
            key("tmax", "5", "time budget"),
        ],
    },
    CommandSpec {
        name: "newton-arcs",
        about: "circle arcs lying in the immediate basin of one root for every sampled h",
        formats: REPORT,
        keys: &[
            key(
                "poly",
                "cube-roots",
                "preset name or polynomial file; roots in the closed unit disk",
            ),
            key("root", "0", "root index"),
            key("radius", "3", "circle radius, at least 3"),
            key("h-samples", "16", "number of log-spaced h values"),
            key("resolution", "360", "angular samples"),
        ],
    },
    CommandSpec {
        name: "exp-family",
        about: "dynamical or parameter plane of an entire family",
        formats: IMAGE,
        keys: &[
            key("kind", "exp", "exp | sin | cos | expsin | expcos"),
            key("lambda", "0.25,0", "parameter re,im"),
            key("plane", "dynamic", "dynamic | param | strip"),
            key("window", "1,0,8,8", "cx,cy,width,height"),
            key("size", "512x512", "COLSxROWS"),
            key(
                "max-iter",
                "200",
                "iteration cap (strip depth for the strip plane)",
            ),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "yoccoz-limbs",
        about: "Yoccoz disks in the log-multiplier plane",
        formats: IMAGE,
        keys: &[
            key("q-max", "20", "largest denominator"),
            key(
                "window",
                "0,3.125,2,6.25",
                "cx,cy,width,height in log lambda",
            ),
            key("size", "256x800", "COLSxROWS"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "limb-diameter",
        about: "empirical diameters of the p/q limbs of the Mandelbrot set",
        formats: TABLE,
        keys: &[
            opt("p", "numerator; with --q estimates a single limb"),
            opt("q", "denominator"),
            key("q-max", "8", "tabulate every reduced p/q with q up to this"),
            key("sampling", "8", "extra ray directions per limb"),
        ],
    },
    CommandSpec {
        name: "solve-param",
        about: "solve a critical-orbit condition for the parameter",
        formats: REPORT,
        keys: &[
            key("family", "quadratic", "parameter family"),
            key(
                "condition",
                "period3",
                "periodN, preperiodic:M,N or multiplier:RE,IM",
            ),
            key("start", "0,1", "Newton start re,im"),
            key("tol", "1e-12", "residual tolerance"),
        ],
    },
    CommandSpec {
        name: "paper-figures",
        about: "render the figure set into a directory with a hash manifest",
        formats: REPORT,
        keys: &[
            key("dir", "figures", "output directory"),
            opt("figures", "figure table file, defaults to the shipped one"),
            PALETTE,
        ],
    },
    CommandSpec {
        name: "baseline-check",
        about: "recompute the figure set and compare against a hash manifest",
        formats: REPORT,
        keys: &[
            opt(
                "dir",
                "directory holding manifest.sha256, defaults to the shipped baseline",
            ),
            opt("figures", "figure table file, defaults to the shipped one"),
            PALETTE,
        ],
    },
];

pub fn find(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}
