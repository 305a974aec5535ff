//! Parameter spectra: which `(v, k)` are known to exist, and why.
//!
//! For each `k` the interesting window is `P(k) ≤ v < G(k)`, where
//! `P(k) = k² − k + 1` is the projective plane bound and `G(k) = 2L + 1` is
//! the Golomb bound from the shortest known Golomb ruler of length `L`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{exact_sqrt, factorize, is_prime, is_prime_power, is_sum_of_two_squares};
use crate::bdc::{family_bdc_params, BdcFamily, BdcSpec};
use crate::construct::{bose_ruler, ruzsa_ruler, singer_ruler};
use crate::extend::extend_chain_bdc;
use crate::matrix::IncidenceMatrix;
use crate::ruler::{orbit_first_hits, search_mgr, Ruler, SearchOutcome};
use crate::{Error, Result};

/// Golomb bounds `G(k)` for `k = 2..=83`; `L = (G − 1) / 2`.
const EMBEDDED_G: [u64; 82] = [
    3, 7, 13, 23, 35, 51, 69, 89, 111, 145, 171, 213, 255, 303, 355, 399, 433, 493, 567, 667, 713, 745, 851, 961, 985,
    1107, 1171, 1247, 1361, 1495, 1569, 1719, 1877, 1975, 2011, 2199, 2293, 2505, 2565, 2611, 2795, 3015, 3193, 3375,
    3407, 3609, 3775, 3917, 4189, 4381, 4541, 4695, 4747, 5197, 5451, 5547, 5703, 5823, 6039, 6269, 6431, 6783, 7055,
    7187, 7515, 7639, 7913, 8291, 8435, 8661, 8947, 9027, 9507, 9965, 10179, 10409, 10599, 10817, 11127, 11435, 11629,
    12041,
];

/// Shortest known Golomb ruler lengths by order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulerDb {
    lengths: BTreeMap<usize, u64>,
}

impl Default for RulerDb {
    fn default() -> Self {
        Self::embedded()
    }
}

impl RulerDb {
    /// Built-in table covering `2 ≤ k ≤ 83`.
    pub fn embedded() -> Self {
        let lengths = EMBEDDED_G.iter().enumerate().map(|(i, g)| (i + 2, (g - 1) / 2)).collect();
        RulerDb { lengths }
    }

    /// Parses `k,length` lines; `#` starts a comment.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lengths = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::ParseError { line: no + 1, msg: msg.to_string() };
            let (k, l) = line.split_once(',').ok_or_else(|| err("expected `k,length`"))?;
            let k: usize = k.trim().parse().map_err(|_| err("bad k"))?;
            let l: u64 = l.trim().parse().map_err(|_| err("bad length"))?;
            lengths.insert(k, l);
        }
        let db = RulerDb { lengths };
        db.validate()?;
        Ok(db)
    }

    /// This table with entries from `other` taking precedence.
    pub fn merged(&self, other: &RulerDb) -> Result<Self> {
        let mut lengths = self.lengths.clone();
        lengths.extend(other.lengths.iter().map(|(&k, &l)| (k, l)));
        let db = RulerDb { lengths };
        db.validate()?;
        Ok(db)
    }

    fn validate(&self) -> Result<()> {
        let mut prev: Option<u64> = None;
        for (&k, &l) in &self.lengths {
            if prev.is_some_and(|p| l <= p) || l as u128 >= (k as u128) * (k as u128) {
                return Err(Error::MonotonicityViolation(k));
            }
            prev = Some(l);
        }
        Ok(())
    }

    pub fn length(&self, k: usize) -> Option<u64> {
        self.lengths.get(&k).copied()
    }

    pub fn ks(&self) -> impl Iterator<Item = usize> + '_ {
        self.lengths.keys().copied()
    }

    /// `(P(k), G(k))`.
    pub fn bounds(&self, k: usize) -> Result<(u64, u64)> {
        let l = self.length(k).ok_or(Error::UnknownK(k))?;
        Ok((projective_bound(k), 2 * l + 1))
    }

    /// Smallest `n` with `v < G(n)`.
    pub fn k_sharp(&self, v: u64) -> Option<usize> {
        self.lengths.iter().find(|(_, &l)| v < 2 * l + 1).map(|(&k, _)| k)
    }
}

pub fn projective_bound(k: usize) -> u64 {
    let k = k as u64;
    k * k - k + 1
}

/// Where an existence claim comes from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Provenance {
    /// Family id, e.g. `2.1`, `4.3`, `orbit`.
    pub id: &'static str,
    /// Short letter used in published tables, when one exists.
    pub tag: Option<&'static str>,
    /// Parameters in the family's own order (see [`FAMILIES`]).
    pub params: Vec<u64>,
    /// Whether [`audit`] can rebuild a verified matrix for it.
    pub audited: bool,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "({})", self.id),
        }
    }
}

/// Why a configuration cannot exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Reason {
    /// No projective plane of order `k − 1`.
    BruckRyser,
    /// No `(k² − k + 2)_k`.
    Deficiency1,
    /// Individually settled case (no configuration at all).
    Sporadic,
    /// No cyclic projective plane of non-prime-power order.
    BaumertGordon,
    /// Published exhaustive result on cyclic configurations.
    SporadicCyclic,
    /// Exhaustive ruler search in this crate.
    Search,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::BruckRyser => "br",
            Reason::Deficiency1 => "t",
            Reason::Sporadic => "sp",
            Reason::BaumertGordon => "s",
            Reason::SporadicCyclic => "c",
            Reason::Search => "search",
        }
    }
}

/// Status of one `(v, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    ExistsCyclic {
        provenance: Vec<Provenance>,
    },
    /// Exists; no cyclic example is known here.
    Exists {
        provenance: Vec<Provenance>,
    },
    NoConfiguration {
        reason: Reason,
    },
    /// No cyclic configuration; `noncyclic` lists known non-cyclic ones.
    NoCyclic {
        reasons: Vec<Reason>,
        noncyclic: Vec<Provenance>,
    },
    Unknown,
}

impl Verdict {
    pub fn exists(&self) -> bool {
        match self {
            Verdict::ExistsCyclic { .. } | Verdict::Exists { .. } => true,
            Verdict::NoCyclic { noncyclic, .. } => !noncyclic.is_empty(),
            _ => false,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Verdict::ExistsCyclic { .. })
    }

    /// Settled as far as cyclic configurations go.
    pub fn cyclic_resolved(&self) -> bool {
        matches!(self, Verdict::ExistsCyclic { .. } | Verdict::NoCyclic { .. } | Verdict::NoConfiguration { .. })
    }

    /// Settled as far as any configuration goes.
    pub fn resolved(&self) -> bool {
        self.exists() || matches!(self, Verdict::NoConfiguration { .. })
    }
}

/// Non-existence tests that need no search.
pub fn nonexistence(v: u64, k: usize) -> Option<Reason> {
    let kk = k as u64;
    if k < 3 {
        return None;
    }
    let p = projective_bound(k);
    let n = kk - 1;
    if v == p && matches!(n % 4, 1 | 2) && !is_sum_of_two_squares(n) {
        return Some(Reason::BruckRyser);
    }
    if v == p + 1 && ((5..=10).contains(&k) || (exact_sqrt(kk).is_none() && exact_sqrt(kk - 2).is_none())) {
        return Some(Reason::Deficiency1);
    }
    if matches!((v, k), (33, 6) | (111, 11) | (112, 11)) {
        return Some(Reason::Sporadic);
    }
    None
}

/// Cyclic-only non-existence: published exhaustive results and the absence
/// of cyclic planes of non-prime-power order.
pub fn cyclic_nonexistence(v: u64, k: usize) -> Option<Reason> {
    if k >= 3 && v == projective_bound(k) && !is_prime_power(k as u64 - 1) {
        return Some(Reason::BaumertGordon);
    }
    // for these orders every cyclic example below G(k) is on record
    if (5..=COMPLETE_CYCLIC_MAX_K).contains(&k) && v >= projective_bound(k) && !published_cyclic(v, k) {
        let g = EMBEDDED_G[k - 2];
        if v < g && nonexistence(v, k).is_none() {
            return Some(Reason::SporadicCyclic);
        }
    }
    let listed: &[(u64, u64)] = match k {
        6 => &[(34, 34)],
        8 => &[(59, 62)],
        9 => &[(75, 79), (81, 84)],
        10 => &[(93, 106)],
        11 => &[(121, 132), (134, 134)],
        12 => &[(135, 155), (157, 157), (160, 160)],
        13 => &[(169, 182), (184, 192)],
        14 => &[(185, 224)],
        15 => &[(256, 260), (263, 263)],
        _ => &[],
    };
    listed.iter().any(|&(a, b)| (a..=b).contains(&v)).then_some(Reason::SporadicCyclic)
}

/// Published cyclic existence results for `5 ≤ k ≤ 51`, as inclusive
/// ranges of `v` inside `[P(k), G(k))`.
#[rustfmt::skip]
const PUBLISHED_CYCLIC: &[(usize, &[(u64, u64)])] = &[
    (5, &[(21, 21)]),
    (6, &[(31, 31)]),
    (7, &[(48, 50)]),
    (8, &[(57, 57), (63, 68)]),
    (9, &[(73, 73), (80, 80), (85, 88)]),
    (10, &[(91, 91), (107, 110)]),
    (11, &[(120, 120), (133, 133), (135, 144)]),
    (12, &[(133, 133), (156, 156), (158, 159), (161, 170)]),
    (13, &[(168, 168), (183, 183), (193, 212)]),
    (14, &[(183, 183), (225, 254)]),
    (15, &[(255, 255), (267, 302)]),
    (16, &[(255, 255), (272, 273), (288, 288), (307, 307), (313, 313), (317, 318), (320, 354)]),
    (17, &[(273, 273), (288, 288), (307, 307), (342, 343), (349, 349), (353, 353), (356, 398)]),
    (18, &[(307, 307), (342, 342), (360, 360), (381, 381), (389, 389), (391, 391), (395, 398), (401, 401), (403, 432)]),
    (19, &[(360, 360), (381, 381), (445, 445), (450, 450), (453, 453), (455, 458), (460, 492)]),
    (20, &[(381, 381), (482, 482), (497, 498), (501, 503), (505, 509), (511, 566)]),
    (21, &[(506, 506), (528, 528), (553, 553), (586, 586), (589, 589), (591, 592), (594, 595), (597, 598), (600, 666)]),
    (22, &[(506, 506), (528, 528), (553, 553), (624, 624), (633, 633), (637, 637), (640, 642), (644, 712)]),
    (23, &[(528, 528), (553, 553), (624, 624), (651, 651), (683, 683), (686, 688), (692, 692), (695, 700), (702, 744)]),
    (24, &[(553, 553), (624, 624), (651, 651), (728, 728), (738, 739), (742, 742), (747, 749), (752, 753), (755, 755), (757, 850)]),
    (25, &[(624, 624), (651, 651), (728, 728), (757, 757), (812, 812), (830, 830), (837, 960)]),
    (26, &[(651, 651), (728, 728), (757, 757), (812, 812), (840, 840), (871, 871), (885, 885), (888, 888), (895, 895), (900, 900), (903, 903), (905, 907), (910, 913), (915, 917), (919, 925), (927, 927), (929, 984)]),
    (27, &[(728, 728), (757, 757), (812, 812), (840, 840), (871, 871), (930, 930), (960, 960), (970, 972), (975, 975), (977, 978), (985, 985), (987, 988), (991, 991), (993, 997), (1000, 1001), (1003, 1015), (1017, 1106)]),
    (28, &[(757, 757), (812, 812), (840, 840), (871, 871), (930, 930), (960, 960), (993, 993), (1006, 1006), (1023, 1023), (1045, 1045), (1051, 1051), (1053, 1053), (1057, 1057), (1063, 1067), (1070, 1072), (1074, 1075), (1077, 1077), (1079, 1170)]),
    (29, &[(840, 840), (871, 871), (930, 930), (960, 960), (993, 993), (1023, 1023), (1057, 1057), (1091, 1091), (1127, 1127), (1135, 1135), (1137, 1137), (1141, 1141), (1143, 1143), (1145, 1146), (1151, 1246)]),
    (30, &[(871, 871), (930, 930), (960, 960), (993, 993), (1023, 1023), (1057, 1057), (1196, 1196), (1198, 1201), (1206, 1207), (1216, 1217), (1219, 1224), (1226, 1360)]),
    (31, &[(960, 960), (993, 993), (1023, 1023), (1057, 1057), (1298, 1298), (1309, 1309), (1314, 1315), (1320, 1321), (1324, 1325), (1330, 1335), (1339, 1346), (1348, 1494)]),
    (32, &[(993, 993), (1023, 1023), (1057, 1057), (1332, 1332), (1366, 1366), (1368, 1368), (1383, 1383), (1388, 1388), (1391, 1395), (1397, 1398), (1400, 1401), (1403, 1403), (1406, 1409), (1411, 1414), (1416, 1416), (1420, 1421), (1424, 1434), (1436, 1568)]),
    (33, &[(1057, 1057), (1332, 1332), (1368, 1368), (1407, 1407), (1492, 1492), (1506, 1507), (1515, 1515), (1518, 1518), (1520, 1521), (1528, 1529), (1533, 1533), (1535, 1535), (1537, 1537), (1540, 1540), (1542, 1543), (1545, 1545), (1547, 1553), (1555, 1559), (1561, 1718)]),
    (34, &[(1332, 1332), (1368, 1368), (1407, 1407), (1640, 1640), (1664, 1665), (1670, 1670), (1676, 1676), (1680, 1680), (1686, 1686), (1693, 1693), (1698, 1699), (1702, 1702), (1705, 1705), (1708, 1712), (1714, 1714), (1717, 1717), (1721, 1721), (1723, 1726), (1728, 1728), (1730, 1742), (1744, 1752), (1754, 1876)]),
    (35, &[(1332, 1332), (1368, 1368), (1407, 1407), (1640, 1640), (1680, 1680), (1723, 1723), (1777, 1777), (1781, 1781), (1783, 1783), (1788, 1788), (1792, 1793), (1795, 1795), (1798, 1798), (1800, 1803), (1805, 1807), (1810, 1810), (1812, 1815), (1817, 1974)]),
    (36, &[(1332, 1332), (1368, 1368), (1407, 1407), (1640, 1640), (1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1853, 1853), (1855, 1855), (1860, 1860), (1867, 1870), (1872, 1876), (1878, 1878), (1882, 1884), (1886, 2010)]),
    (37, &[(1368, 1368), (1407, 1407), (1640, 1640), (1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1892, 1893), (1910, 1910), (1922, 1922), (1930, 1930), (1934, 1934), (1938, 1938), (1943, 1944), (1947, 1953), (1957, 1957), (1959, 1960), (1962, 1963), (1965, 1967), (1969, 1969), (1972, 2198)]),
    (38, &[(1407, 1407), (1640, 1640), (1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1893, 1893), (2059, 2059), (2061, 2061), (2073, 2073), (2088, 2089), (2092, 2092), (2094, 2094), (2096, 2097), (2099, 2101), (2103, 2103), (2105, 2108), (2110, 2111), (2114, 2116), (2118, 2118), (2123, 2124), (2126, 2130), (2135, 2153), (2155, 2157), (2159, 2164), (2166, 2170), (2172, 2292)]),
    (39, &[(1640, 1640), (1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1893, 1893), (2162, 2162), (2187, 2187), (2195, 2195), (2208, 2208), (2240, 2241), (2243, 2243), (2247, 2248), (2251, 2252), (2254, 2255), (2257, 2260), (2263, 2265), (2269, 2270), (2277, 2279), (2281, 2281), (2283, 2283), (2287, 2287), (2289, 2309), (2311, 2311), (2313, 2328), (2330, 2504)]),
    (40, &[(1640, 1640), (1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1893, 1893), (2162, 2162), (2208, 2208), (2257, 2257), (2326, 2326), (2338, 2338), (2345, 2345), (2349, 2349), (2353, 2353), (2355, 2355), (2357, 2357), (2360, 2361), (2363, 2364), (2366, 2368), (2370, 2370), (2372, 2372), (2374, 2377), (2379, 2381), (2387, 2389), (2393, 2393), (2395, 2397), (2399, 2401), (2403, 2404), (2406, 2407), (2409, 2409), (2411, 2418), (2420, 2436), (2438, 2564)]),
    (41, &[(1680, 1680), (1723, 1723), (1806, 1806), (1848, 1848), (1893, 1893), (2162, 2162), (2208, 2208), (2257, 2257), (2345, 2345), (2399, 2400), (2436, 2436), (2449, 2449), (2451, 2451), (2459, 2460), (2465, 2465), (2471, 2472), (2479, 2480), (2483, 2483), (2485, 2485), (2491, 2491), (2493, 2494), (2496, 2500), (2502, 2503), (2505, 2505), (2507, 2513), (2515, 2525), (2528, 2540), (2542, 2542), (2544, 2610)]),
    (42, &[(1723, 1723), (1806, 1806), (1848, 1848), (1893, 1893), (2162, 2162), (2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2510, 2510), (2522, 2522), (2539, 2539), (2541, 2541), (2557, 2559), (2562, 2562), (2564, 2564), (2566, 2568), (2570, 2570), (2573, 2573), (2577, 2578), (2580, 2584), (2586, 2590), (2593, 2593), (2595, 2595), (2597, 2601), (2603, 2610), (2612, 2613), (2615, 2626), (2628, 2794)]),
    (43, &[(1848, 1848), (1893, 1893), (2162, 2162), (2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2684, 2684), (2686, 2686), (2688, 2688), (2715, 2715), (2725, 2725), (2728, 2728), (2734, 2734), (2737, 2737), (2739, 2739), (2744, 2744), (2752, 2752), (2756, 2757), (2759, 2759), (2762, 2763), (2766, 2768), (2771, 2772), (2776, 2777), (2783, 2783), (2786, 2789), (2791, 2792), (2794, 2798), (2800, 2801), (2803, 2811), (2813, 2815), (2817, 2858), (2860, 3014)]),
    (44, &[(1893, 1893), (2162, 2162), (2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2811, 2811), (2821, 2821), (2826, 2826), (2834, 2834), (2836, 2836), (2844, 2844), (2848, 2849), (2861, 2863), (2865, 2867), (2870, 2871), (2873, 2875), (2879, 2881), (2884, 2884), (2887, 2887), (2890, 2895), (2898, 2899), (2901, 2912), (2914, 2914), (2916, 3192)]),
    (45, &[(2162, 2162), (2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (2994, 2994), (3013, 3014), (3019, 3019), (3038, 3038), (3052, 3052), (3054, 3054), (3056, 3056), (3066, 3066), (3069, 3069), (3082, 3085), (3087, 3088), (3090, 3091), (3093, 3093), (3095, 3098), (3101, 3103), (3105, 3112), (3114, 3114), (3116, 3120), (3122, 3163), (3165, 3374)]),
    (46, &[(2162, 2162), (2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (3124, 3124), (3171, 3171), (3188, 3188), (3191, 3191), (3194, 3194), (3196, 3198), (3206, 3206), (3216, 3216), (3218, 3219), (3221, 3221), (3227, 3228), (3231, 3231), (3233, 3234), (3238, 3241), (3244, 3247), (3249, 3250), (3252, 3265), (3267, 3271), (3273, 3278), (3280, 3406)]),
    (47, &[(2208, 2208), (2257, 2257), (2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (3255, 3255), (3261, 3261), (3271, 3271), (3280, 3280), (3285, 3285), (3292, 3292), (3301, 3301), (3312, 3312), (3327, 3327), (3331, 3331), (3342, 3343), (3346, 3348), (3351, 3351), (3353, 3353), (3355, 3357), (3360, 3371), (3375, 3379), (3381, 3384), (3387, 3387), (3389, 3390), (3392, 3402), (3404, 3408), (3412, 3413), (3415, 3427), (3429, 3608)]),
    (48, &[(2257, 2257), (2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (3418, 3418), (3422, 3422), (3431, 3431), (3445, 3445), (3459, 3459), (3480, 3480), (3487, 3487), (3491, 3492), (3495, 3495), (3499, 3499), (3509, 3509), (3512, 3512), (3515, 3515), (3518, 3519), (3522, 3523), (3526, 3528), (3535, 3535), (3540, 3541), (3545, 3547), (3549, 3552), (3554, 3563), (3565, 3565), (3567, 3568), (3570, 3570), (3572, 3578), (3580, 3583), (3586, 3587), (3589, 3595), (3597, 3605), (3607, 3618), (3620, 3630), (3632, 3640), (3642, 3774)]),
    (49, &[(2400, 2400), (2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (3422, 3422), (3480, 3480), (3541, 3541), (3608, 3608), (3627, 3627), (3637, 3637), (3640, 3640), (3642, 3642), (3644, 3644), (3646, 3647), (3649, 3649), (3652, 3653), (3655, 3655), (3660, 3660), (3665, 3665), (3669, 3669), (3671, 3671), (3675, 3675), (3677, 3678), (3680, 3683), (3685, 3685), (3688, 3692), (3694, 3701), (3707, 3707), (3709, 3709), (3711, 3722), (3724, 3730), (3732, 3735), (3737, 3740), (3742, 3743), (3745, 3745), (3747, 3755), (3757, 3825), (3827, 3837), (3839, 3916)]),
    (50, &[(2451, 2451), (2756, 2756), (2808, 2808), (2863, 2863), (3422, 3422), (3480, 3480), (3541, 3541), (3660, 3660), (3685, 3685), (3688, 3688), (3692, 3692), (3712, 3712), (3714, 3714), (3716, 3716), (3720, 3720), (3726, 3726), (3743, 3743), (3745, 3745), (3749, 3750), (3752, 3753), (3758, 3758), (3762, 3762), (3766, 3767), (3769, 3770), (3772, 3772), (3775, 3775), (3779, 3780), (3782, 3785), (3788, 3791), (3796, 3796), (3803, 3803), (3805, 3805), (3811, 3811), (3813, 3813), (3817, 3823), (3825, 3825), (3828, 3832), (3834, 3840), (3842, 3843), (3845, 3846), (3848, 3869), (3871, 4188)]),
    (51, &[(2756, 2756), (2808, 2808), (2863, 2863), (3422, 3422), (3480, 3480), (3541, 3541), (3660, 3660), (3720, 3720), (3783, 3783), (3871, 3871), (3894, 3894), (3927, 3927), (3938, 3938), (3986, 3986), (3998, 3998), (4004, 4004), (4018, 4018), (4032, 4032), (4035, 4035), (4037, 4037), (4042, 4042), (4048, 4050), (4053, 4053), (4060, 4060), (4064, 4066), (4068, 4068), (4072, 4072), (4076, 4076), (4079, 4083), (4085, 4085), (4087, 4087), (4090, 4091), (4093, 4093), (4095, 4100), (4102, 4104), (4107, 4109), (4112, 4120), (4124, 4125), (4127, 4131), (4133, 4156), (4158, 4164), (4166, 4196), (4199, 4200), (4202, 4206), (4208, 4231), (4233, 4380)]),
];

/// Largest order whose cyclic spectrum below `G(k)` is completely known.
pub const COMPLETE_CYCLIC_MAX_K: usize = 14;

/// Whether a cyclic `v_k` appears in the published existence data.
pub fn published_cyclic(v: u64, k: usize) -> bool {
    PUBLISHED_CYCLIC
        .iter()
        .find(|(kk, _)| *kk == k)
        .is_some_and(|(_, ranges)| ranges.iter().any(|&(a, b)| (a..=b).contains(&v)))
}

/// Individually known non-cyclic configurations.
pub fn sporadic_existence(v: u64, k: usize) -> bool {
    matches!((v, k), (34, 6) | (45, 7) | (82, 9) | (135, 12))
}

/// Catalogued families: `(id, tag, cyclic, audited, parameter names)`.
pub const FAMILIES: &[(&str, Option<&str>, bool, bool, &str)] = &[
    ("2.1", Some("a"), true, true, "q,delta"),
    ("2.2", Some("b"), true, true, "q,delta"),
    ("2.3", Some("c"), true, true, "p,delta"),
    ("2.4", None, false, false, "q,s,delta"),
    ("2.5", Some("f"), false, false, "q,s,delta"),
    ("2.6", Some("g"), false, false, "q,c,delta"),
    ("2.7", Some("h"), false, false, "q,delta"),
    ("2.8", Some("j"), false, false, "p,s,delta"),
    ("2.9", Some("k"), false, false, "q,c,delta"),
    ("2.10", None, false, false, "q,delta"),
    ("2.11", None, false, false, "q,delta"),
    ("2.12", None, false, false, "q,delta"),
    ("2.13", Some("λ"), false, false, "q,r,delta"),
    ("2.14", Some("λ"), false, false, "q,delta"),
    ("2.15", Some("λ"), false, false, "q,t,delta"),
    ("2.16", Some("λ"), false, false, "q,t,delta"),
    ("2.theta", Some("m"), false, false, "q,s,theta,delta"),
    ("4.1", None, false, true, "q,c,theta,delta"),
    ("4.2", None, false, true, "p,c,theta,delta"),
    ("4.3", Some("r"), false, true, "q,c,theta,delta"),
    ("4.4", Some("S"), false, false, "p,c,theta,delta"),
    ("4.5", Some("T"), false, false, "p,c,theta,delta"),
    ("4.6", None, false, false, "q,c,theta,delta"),
    ("3.3-proj", Some("W"), false, false, "q,t,c,delta"),
    ("3.3-affine", Some("P"), false, false, "q,variant,param,delta"),
];

fn family_meta(id: &str) -> Result<(&'static str, Option<&'static str>, bool, bool)> {
    FAMILIES
        .iter()
        .find(|f| f.0 == id)
        .map(|f| (f.0, f.1, f.2, f.3))
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Whether the family yields cyclic configurations.
pub fn family_is_cyclic(id: &str) -> Result<bool> {
    Ok(family_meta(id)?.2)
}

/// All `v` in `[lo, hi)` that family `id` yields for order `k`, each with
/// the first parameter tuple found. Sorted by `v`.
pub fn family_enumerate(id: &str, k: usize, lo: u64, hi: u64) -> Result<Vec<(u64, Provenance)>> {
    let (fid, tag, _, audited) = family_meta(id)?;
    let k = k as u64;
    let mut hits: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut put = |v: u64, params: Vec<u64>| {
        if (lo..hi).contains(&v) {
            hits.entry(v).or_insert(params);
        }
    };
    // every family has v ≥ (k − 1)(q − 1), which bounds q
    let qmax = (hi + 2) / k.max(2).saturating_sub(1) + 2;
    let pps = || (2..=qmax).filter(|&q| is_prime_power(q));
    let primes = || (2..=qmax).filter(|&p| is_prime(p));
    let squares = || pps().filter_map(|q| exact_sqrt(q).map(|r| (q, r)));
    match fid {
        "2.1" => pps().filter(|q| q + 1 >= k).for_each(|q| put(q * q + q + 1, vec![q, q + 1 - k])),
        "2.2" => pps().filter(|&q| q >= k).for_each(|q| put(q * q - 1, vec![q, q - k])),
        "2.3" => primes().filter(|p| *p > k && *p >= 3).for_each(|p| put(p * p - p, vec![p, p - 1 - k])),
        "2.4" | "2.5" => {
            for q in pps().take_while(|q| q * q - q * q.saturating_sub(k) < hi + q) {
                for s in (0..q).filter(|s| q - s >= k) {
                    let v = if fid == "2.4" { q * q - q * s } else { q * q - (q - 1) * s - 1 };
                    put(v, vec![q, s, q - s - k]);
                }
            }
        }
        "2.6" => {
            for (q, r) in squares() {
                for c in (2..=q - r).filter(|c| r + c >= k) {
                    put(c * (q + r + 1), vec![q, c, r + c - k]);
                }
            }
        }
        "2.7" => squares().filter(|(q, _)| *q >= k).for_each(|(q, r)| put(q * q - r, vec![q, q - k])),
        "2.8" => {
            for p in primes().take_while(|p| 2 * p * p < hi) {
                let qmax = (2..p).rev().find(|&q| is_prime_power(q) && q * q + q < p);
                if let Some(q) = qmax {
                    let s = (q + 1).min(k.saturating_sub(p).max(1));
                    if p + q + 1 >= k {
                        put(2 * p * p, vec![p, s, p + s - k]);
                    }
                }
            }
        }
        "2.9" => {
            for q in pps() {
                for c in (2..=q).filter(|&c| c >= k) {
                    let ok = if c == k { c <= q.div_ceil(2) } else { true };
                    if ok {
                        put(c * (q - 1), vec![q, c, c - k]);
                    }
                }
            }
        }
        "2.10" => pps()
            .filter(|q| q % 2 == 1 && q.div_ceil(2) >= k)
            .for_each(|q| put(q * (q - 1) / 2, vec![q, q.div_ceil(2) - k])),
        "2.11" => pps()
            .filter(|q| q % 2 == 1 && (q - 1) / 2 >= k)
            .for_each(|q| put(q * (q + 1) / 2, vec![q, (q - 1) / 2 - k])),
        "2.12" => squares().filter(|(q, r)| q - r >= k).for_each(|(q, r)| put(q * q + q - q * r, vec![q, q - r - k])),
        "2.13" => {
            for q in pps().filter(|&q| q >= 3) {
                for r in (0..=q - 3).filter(|r| q - r >= k) {
                    put(q * q - r * q - 1, vec![q, r, q - r - k]);
                }
            }
        }
        "2.14" => pps().filter(|q| *q > k).for_each(|q| put(q * q - q - 2, vec![q, q - 1 - k])),
        "2.15" | "2.16" => {
            let minus = if fid == "2.15" { 1 } else { 2 };
            for q in pps() {
                for t in (3..q).filter(|&t| t >= k) {
                    put(t * q - minus, vec![q, t, t - k]);
                }
            }
        }
        "2.theta" => {
            for q in pps() {
                for s in (0..q).filter(|s| q - s >= k) {
                    for theta in 0..=q - s + 1 {
                        put(q * q - q * s + theta, vec![q, s, theta, q - s - k]);
                    }
                }
            }
        }
        "4.1" | "4.3" => {
            for q in pps() {
                for c in (2..=q + 1).filter(|c| *c > k) {
                    for theta in 0..=c + 1 {
                        put(c * (q - 1) + theta, vec![q, c, theta, c - 1 - k]);
                    }
                }
            }
        }
        "4.2" | "4.4" => {
            let top = |p: u64| if fid == "4.2" { p } else { p - 1 };
            for p in primes() {
                for c in (2..=top(p)).filter(|&c| c >= k) {
                    for theta in 0..=c + 1 {
                        put(c * p + theta, vec![p, c, theta, c - k]);
                    }
                }
            }
        }
        "4.5" => {
            for p in primes() {
                for c in (2..=p).filter(|c| *c > k) {
                    for theta in 0..=c + 1 {
                        put(c * (p - 1) + theta, vec![p, c, theta, c - 1 - k]);
                    }
                }
            }
        }
        "4.6" => {
            for (q, r) in squares() {
                for c in (2..=q - r + 1).filter(|&c| c >= k) {
                    for theta in 0..=c + 1 {
                        put(c * (q + r + 1) + theta, vec![q, c, theta, c - k]);
                    }
                }
            }
        }
        "3.3-proj" => {
            for (q, _) in squares() {
                let n = q * q + q + 1;
                for t in factorize(n).into_iter().map(|(t, _)| t) {
                    for c in 1..=t {
                        if let Ok(bp) = family_bdc_params(BdcFamily::Projective { t }, q, c) {
                            if bp.k >= k {
                                put(bp.v, vec![q, t, c, bp.k - k]);
                            }
                        }
                    }
                }
            }
        }
        "3.3-affine" => {
            for (q, _) in squares().filter(|(q, _)| q % 2 == 1) {
                for variant in 1..=5u8 {
                    for param in 1.. {
                        match family_bdc_params(BdcFamily::Affine { variant }, q, param) {
                            Ok(bp) if bp.k >= k => put(bp.v, vec![q, variant as u64, param, bp.k - k]),
                            Ok(_) => {}
                            Err(_) => break,
                        }
                    }
                }
            }
        }
        _ => return Err(Error::UnknownFamily(id.to_string())),
    }
    Ok(hits.into_iter().map(|(v, params)| (v, Provenance { id: fid, tag, params, audited })).collect())
}

/// How hard [`spectrum`] works on open cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effort {
    /// Family formulas, constructions, published results and ruler orbits.
    Formulas,
    /// Additionally runs exhaustive ruler searches on open `v`.
    WithSearch,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    pub effort: Effort,
    /// Node budget per `search_mgr` call; `None` is unlimited.
    pub search_budget: Option<u64>,
    /// Approximate work cap per orbit starting ruler (transforms × k⁴).
    pub orbit_budget: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { effort: Effort::Formulas, search_budget: Some(200_000_000), orbit_budget: 400_000_000 }
    }
}

impl SpectrumOptions {
    pub fn with_search() -> Self {
        SpectrumOptions { effort: Effort::WithSearch, ..Self::default() }
    }
}

/// Verdict for one `v`, serialized flat as `{v, status, ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub v: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// One row of a spectrum table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub k: usize,
    #[serde(rename = "P")]
    pub p: u64,
    #[serde(rename = "G")]
    pub g: u64,
    /// One entry per `v` in `[P, G)`.
    pub verdicts: Vec<Entry>,
    /// Least `v` from which every value up to `G` has a cyclic example.
    pub e_c: u64,
    /// Least `v` from which every value up to `G` has some example.
    pub e: u64,
    /// Least `v` with a cyclic example (at most `G`).
    pub v_delta: u64,
    /// Percent of the window settled for cyclic configurations.
    pub filling: u32,
    /// Percent of the window settled for all configurations.
    pub filling_all: u32,
}

impl SpectrumRow {
    pub fn verdict(&self, v: u64) -> Option<&Verdict> {
        self.verdicts.iter().find(|e| e.v == v).map(|e| &e.verdict)
    }

    fn percent(&self, count: usize) -> u32 {
        let width = (self.g - self.p) as u128;
        if width == 0 {
            return 100;
        }
        // half-up rounding
        ((count as u128 * 200 + width) / (2 * width)) as u32
    }
}

impl fmt::Display for SpectrumRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "k={} P={} G={} v_delta={} E_c={} E={} filling={}% filling_all={}%",
            self.k, self.p, self.g, self.v_delta, self.e_c, self.e, self.filling, self.filling_all
        )?;
        let join = |ps: &[Provenance]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("·");
        for Entry { v, verdict } in &self.verdicts {
            let (status, detail) = match verdict {
                Verdict::ExistsCyclic { provenance } => ("cyclic", join(provenance)),
                Verdict::Exists { provenance } => ("exists", join(provenance)),
                Verdict::NoConfiguration { reason } => ("none", reason.tag().to_string()),
                Verdict::NoCyclic { reasons, noncyclic } => {
                    let why = reasons.iter().map(|r| r.tag()).collect::<Vec<_>>().join("·");
                    if noncyclic.is_empty() {
                        ("no-cyclic", why)
                    } else {
                        ("no-cyclic", format!("{why}; exists {}", join(noncyclic)))
                    }
                }
                Verdict::Unknown => ("unknown", String::new()),
            };
            writeln!(f, "{v:>8}  {status:<10} {detail}")?;
        }
        Ok(())
    }
}

fn sporadic_provenance() -> Provenance {
    Provenance { id: "sporadic", tag: None, params: vec![], audited: false }
}

/// Constructed cyclic rulers of order at least `k` and modulus below `cap`.
fn starting_rulers(k: usize, cap: u64) -> Vec<(Ruler, Provenance)> {
    let mut out = Vec::new();
    let kk = k as u64;
    let mut add = |r: Result<Ruler>, id: &'static str, tag: &'static str, param: u64| {
        if let Ok(r) = r {
            out.push((r, Provenance { id, tag: Some(tag), params: vec![param], audited: true }));
        }
    };
    for q in (2..).take_while(|q| q * q < cap).filter(|&q| is_prime_power(q)) {
        if q + 1 >= kk && q * q + q + 1 < cap {
            add(singer_ruler(q), "2.1", "a", q);
        }
        if q >= kk {
            add(bose_ruler(q), "2.2", "b", q);
        }
    }
    for p in (3..).take_while(|p| p * p - p < cap).filter(|&p| is_prime(p)) {
        if p > kk {
            add(ruzsa_ruler(p, None), "2.3", "c", p);
        }
    }
    out
}

fn combine(v: u64, k: usize, cyc: Vec<Provenance>, non: Vec<Provenance>) -> Result<Verdict> {
    let contradiction = |detail: &str| Error::Contradiction { v, k, detail: detail.to_string() };
    Ok(if let Some(reason) = nonexistence(v, k) {
        if !cyc.is_empty() || !non.is_empty() {
            return Err(contradiction("existence claimed where none is possible"));
        }
        Verdict::NoConfiguration { reason }
    } else if let Some(reason) = cyclic_nonexistence(v, k) {
        if !cyc.is_empty() {
            return Err(contradiction("cyclic existence claimed against a cyclic non-existence result"));
        }
        Verdict::NoCyclic { reasons: vec![reason], noncyclic: non }
    } else if !cyc.is_empty() {
        let mut all = cyc;
        all.extend(non);
        Verdict::ExistsCyclic { provenance: all }
    } else if !non.is_empty() {
        Verdict::Exists { provenance: non }
    } else {
        Verdict::Unknown
    })
}

/// Folds an exhaustive search outcome into a verdict.
fn apply_search(v: u64, k: usize, verdict: Verdict, outcome: SearchOutcome) -> Result<Verdict> {
    let found = Provenance { id: "search", tag: None, params: vec![], audited: true };
    Ok(match (outcome, verdict) {
        (SearchOutcome::BudgetExceeded, verdict) => verdict,
        (SearchOutcome::Found(_), Verdict::NoCyclic { .. } | Verdict::NoConfiguration { .. }) => {
            return Err(Error::Contradiction {
                v,
                k,
                detail: "search found a cyclic example against a non-existence result".into(),
            })
        }
        (SearchOutcome::Found(_), Verdict::Exists { mut provenance }) => {
            provenance.insert(0, found);
            Verdict::ExistsCyclic { provenance }
        }
        (SearchOutcome::Found(_), Verdict::ExistsCyclic { provenance }) => Verdict::ExistsCyclic { provenance },
        (SearchOutcome::Found(_), Verdict::Unknown) => Verdict::ExistsCyclic { provenance: vec![found] },
        (SearchOutcome::NotFound, Verdict::ExistsCyclic { .. }) => {
            return Err(Error::Contradiction { v, k, detail: "search refutes a cyclic construction".into() })
        }
        (SearchOutcome::NotFound, Verdict::NoCyclic { mut reasons, noncyclic }) => {
            reasons.push(Reason::Search);
            Verdict::NoCyclic { reasons, noncyclic }
        }
        (SearchOutcome::NotFound, Verdict::Exists { provenance }) => {
            Verdict::NoCyclic { reasons: vec![Reason::Search], noncyclic: provenance }
        }
        (SearchOutcome::NotFound, Verdict::Unknown) => {
            Verdict::NoCyclic { reasons: vec![Reason::Search], noncyclic: vec![] }
        }
        (SearchOutcome::NotFound, verdict @ Verdict::NoConfiguration { .. }) => verdict,
    })
}

/// Runs `search_mgr` on every `v` using a small worker pool.
fn parallel_search(vs: &[u64], k: usize, budget: Option<u64>) -> Vec<SearchOutcome> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<SearchOutcome>>> = Mutex::new(vec![None; vs.len()]);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(vs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&v) = vs.get(i) else { break };
                let out = search_mgr(v, k, budget);
                results.lock().expect("poisoned")[i] = Some(out);
            });
        }
    });
    results.into_inner().expect("poisoned").into_iter().map(|o| o.expect("every v searched")).collect()
}

/// Builds the spectrum row for `k`.
pub fn spectrum(k: usize, db: &RulerDb, opts: SpectrumOptions) -> Result<SpectrumRow> {
    let (p, g) = db.bounds(k)?;
    let mut cyclic: BTreeMap<u64, Vec<Provenance>> = BTreeMap::new();
    let mut noncyclic: BTreeMap<u64, Vec<Provenance>> = BTreeMap::new();

    for &(id, ..) in FAMILIES {
        let cyc = family_is_cyclic(id)?;
        for (v, prov) in family_enumerate(id, k, p, g)? {
            let bucket = if cyc { &mut cyclic } else { &mut noncyclic };
            bucket.entry(v).or_default().push(prov);
        }
    }
    for v in (p..g).filter(|&v| sporadic_existence(v, k)) {
        noncyclic.entry(v).or_default().push(sporadic_provenance());
    }
    for v in (p..g).filter(|&v| published_cyclic(v, k)) {
        let tag = if k <= 15 { "y" } else { "Z" };
        cyclic.entry(v).or_default().push(Provenance {
            id: "published",
            tag: Some(tag),
            params: vec![],
            audited: false,
        });
    }

    // orbits of constructed rulers, cut down to k marks and read modulo
    // other moduli
    let k4 = (k as u64).pow(4).max(1);
    for (base, prov) in starting_rulers(k, 2 * g) {
        let v0 = base.modulus().expect("constructed rulers carry a modulus");
        let backed = |v: &u64| cyclic.get(v).is_some_and(|ps| ps.iter().any(|p| p.audited));
        let targets: Vec<u64> = (p..g)
            .filter(|&v| v != v0 && !backed(&v) && cyclic_nonexistence(v, k).is_none())
            .filter(|&v| nonexistence(v, k).is_none())
            .collect();
        if targets.is_empty() {
            continue;
        }
        let budget = (opts.orbit_budget / k4).min(crate::arith::totient(v0) * v0);
        for (t, _) in orbit_first_hits(&base, v0, k, &targets, budget) {
            let params = vec![v0, prov.params[0]];
            cyclic.entry(t).or_default().push(Provenance { id: "orbit", tag: None, params, audited: true });
        }
    }

    let mut verdicts = Vec::with_capacity((g - p) as usize);
    for v in p..g {
        let cyc = cyclic.remove(&v).unwrap_or_default();
        let non = noncyclic.remove(&v).unwrap_or_default();
        verdicts.push(Entry { v, verdict: combine(v, k, cyc, non)? });
    }

    if opts.effort == Effort::WithSearch {
        let open: Vec<usize> = verdicts
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.verdict, Verdict::Unknown | Verdict::Exists { .. } | Verdict::NoCyclic { .. }))
            .map(|(i, _)| i)
            .collect();
        let vs: Vec<u64> = open.iter().map(|&i| verdicts[i].v).collect();
        let outcomes = parallel_search(&vs, k, opts.search_budget);
        for (i, outcome) in open.into_iter().zip(outcomes) {
            let e = &mut verdicts[i];
            e.verdict = apply_search(e.v, k, std::mem::replace(&mut e.verdict, Verdict::Unknown), outcome)?;
        }
    }

    let tail_start = |pred: &dyn Fn(&Verdict) -> bool| {
        verdicts.iter().rev().take_while(|e| pred(&e.verdict)).last().map_or(g, |e| e.v)
    };
    let e_c = tail_start(&Verdict::is_cyclic);
    let e = tail_start(&Verdict::exists);
    let v_delta = verdicts.iter().find(|e| e.verdict.is_cyclic()).map_or(g, |e| e.v);
    let mut row = SpectrumRow { k, p, g, verdicts, e_c, e, v_delta, filling: 0, filling_all: 0 };
    row.filling = row.percent(row.verdicts.iter().filter(|e| e.verdict.cyclic_resolved()).count());
    row.filling_all = row.percent(row.verdicts.iter().filter(|e| e.verdict.resolved()).count());
    Ok(row)
}

/// Rebuilds a verified `v_k` for an audited provenance, or `None` when the
/// family is catalogued from its formula only.
pub fn audit(v: u64, k: usize, prov: &Provenance) -> Result<Option<IncidenceMatrix>> {
    let ruler_matrix = |r: Ruler, modulus: u64| -> Result<IncidenceMatrix> {
        let r = r.truncate(r.order() - k)?.reduce_mod(modulus)?;
        Ok(IncidenceMatrix::from_circulant(&r.to_circulant()?))
    };
    let m = match (prov.id, prov.params.as_slice()) {
        ("2.1", [q, ..]) => ruler_matrix(singer_ruler(*q)?, v)?,
        ("2.2", [q, ..]) => ruler_matrix(bose_ruler(*q)?, v)?,
        ("2.3", [p, ..]) => ruler_matrix(ruzsa_ruler(*p, None)?, v)?,
        ("orbit", [v0, param]) => {
            let base = starting_rulers(k, v0 + 1)
                .into_iter()
                .find(|(r, prov)| r.modulus() == Some(*v0) && prov.params[0] == *param)
                .map(|(r, _)| r)
                .ok_or(Error::ConstraintViolated("orbit base not reproducible".into()))?;
            let hit = orbit_first_hits(&base, *v0, k, &[v], u64::MAX);
            let (_, r) =
                hit.into_iter().next().ok_or(Error::ConstraintViolated("orbit hit not reproducible".into()))?;
            IncidenceMatrix::from_circulant(&r.to_circulant()?)
        }
        ("search", _) => match search_mgr(v, k, None) {
            SearchOutcome::Found(r) => IncidenceMatrix::from_circulant(&r.to_circulant()?),
            _ => return Err(Error::ConstraintViolated("search witness not reproducible".into())),
        },
        ("4.1" | "4.3", [q, c, theta, delta]) => {
            let b = BdcSpec::split(&bose_ruler(*q)?.to_circulant()?, *q as usize + 1)?;
            let zero = b.weights().iter().position(|&w| w == 0).expect("Bose split has an empty class");
            let s = b.shift_truncate(zero, *c as usize)?;
            extend_chain_bdc(&s, *theta as usize, Some(10_000_000))?.reduce(*delta as usize)?
        }
        ("4.2", [p, c, theta, delta]) => {
            let b = BdcSpec::latin(*p, *c as usize)?;
            extend_chain_bdc(&b, *theta as usize, Some(10_000_000))?.reduce(*delta as usize)?
        }
        _ => return Ok(None),
    };
    let r = m.verify()?;
    if (r.v as u64, r.k) != (v, k) {
        return Err(Error::ConstraintViolated(format!("audit built {}_{} instead of {v}_{k}", r.v, r.k)));
    }
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_from_embedded_db() {
        let db = RulerDb::embedded();
        assert_eq!(db.bounds(5).unwrap(), (21, 23));
        assert_eq!(db.bounds(12).unwrap(), (133, 171));
        assert_eq!(db.bounds(2).unwrap(), (3, 3));
        assert_eq!(db.length(5), Some(11));
        assert_eq!(db.length(16), Some(177));
        assert_eq!(db.bounds(84).unwrap_err(), Error::UnknownK(84));
    }

    #[test]
    fn csv_loading() {
        let db = RulerDb::from_csv("# test\n6,17\n7,25 # comment\n").unwrap();
        assert_eq!(db.bounds(6).unwrap().1, 35);
        let merged = RulerDb::embedded().merged(&db).unwrap();
        assert_eq!(merged.bounds(6).unwrap().1, 35);
        assert!(matches!(RulerDb::from_csv("6,17\n7,10\n"), Err(Error::MonotonicityViolation(7))));
        assert!(matches!(RulerDb::from_csv("6;17"), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(RulerDb::from_csv("3,9"), Err(Error::MonotonicityViolation(3))));
    }

    #[test]
    fn nonexistence_predicates() {
        assert_eq!(nonexistence(43, 7), Some(Reason::BruckRyser));
        assert_eq!(nonexistence(22, 5), Some(Reason::Deficiency1));
        assert_eq!(nonexistence(31, 6), None);
        assert_eq!(nonexistence(33, 6), Some(Reason::Sporadic));
        assert_eq!(cyclic_nonexistence(34, 6), Some(Reason::SporadicCyclic));
        assert_eq!(cyclic_nonexistence(111, 11), Some(Reason::BaumertGordon));
        for n in [6u64, 14, 21, 22, 30, 33, 38, 42, 46, 54, 57, 62] {
            let k = n as usize + 1;
            assert_eq!(nonexistence(projective_bound(k), k), Some(Reason::BruckRyser), "order {n}");
        }
        for n in [18u64, 20, 24, 26, 28, 34, 35, 36, 39, 40, 44, 45, 48, 50] {
            let k = n as usize + 1;
            assert_eq!(cyclic_nonexistence(projective_bound(k), k), Some(Reason::BaumertGordon), "order {n}");
        }
    }

    #[test]
    fn family_examples() {
        let a = family_enumerate("2.1", 6, 31, 35).unwrap();
        assert_eq!(a[0].0, 31);
        assert_eq!(a[0].1.params, vec![5, 0]);
        let c = family_enumerate("2.3", 10, 91, 111).unwrap();
        assert!(c.iter().any(|(v, p)| *v == 110 && p.params[0] == 11));
        let r: Vec<u64> = family_enumerate("4.3", 4, 15, 22).unwrap().into_iter().map(|x| x.0).collect();
        assert_eq!(r, (15..=21).collect::<Vec<_>>());
        assert!(matches!(family_enumerate("9.9", 4, 0, 10), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn table_entries_from_formulas() {
        let vs = |id: &str, k: usize, lo: u64, hi: u64| -> Vec<u64> {
            family_enumerate(id, k, lo, hi).unwrap().into_iter().map(|x| x.0).collect()
        };
        assert!(vs("2.8", 10, 91, 111).contains(&98));
        assert!(vs("2.9", 10, 91, 111).contains(&110));
        assert!(vs("2.6", 9, 73, 89).contains(&78));
        assert!(vs("2.7", 9, 73, 89).contains(&78));
        assert!(vs("2.15", 12, 133, 171).contains(&155));
        assert!(vs("2.16", 12, 133, 171).contains(&154));
    }

    #[test]
    fn every_audited_family_rebuilds() {
        let db = RulerDb::embedded();
        for k in 4..=7 {
            let (p, g) = db.bounds(k).unwrap();
            for &(id, _, _, audited, _) in FAMILIES {
                if !audited {
                    continue;
                }
                for (v, prov) in family_enumerate(id, k, p, g + 30).unwrap() {
                    let m = audit(v, k, &prov).unwrap().expect("audited family");
                    assert_eq!(m.v() as u64, v);
                }
            }
        }
    }

    #[test]
    fn k_sharp_lookup() {
        let db = RulerDb::embedded();
        assert_eq!(db.k_sharp(372), Some(17));
        assert_eq!(db.k_sharp(434), Some(19));
        assert_eq!(db.k_sharp(465), Some(19));
    }
}
