//! Mittag–Leffler values checked against an arbitrary-precision table.
//!
//! The table was produced by `tests/oracles/mittag_leffler.py` (mpmath,
//! 60 digits, series and integral routes cross-checked).

use fracbranch::special_fn::mittag_leffler;

#[rustfmt::skip]
#[allow(clippy::excessive_precision, clippy::approx_constant)]
const TABLE: &[(f64, f64, f64)] = &[
    (0.2, -50.0, 1.691371014778601993e-2),
    (0.2, -30.0, 2.7901545834831146642e-2),
    (0.2, -20.0, 4.1323082634060809605e-2),
    (0.2, -12.0, 6.7165295552234380181e-2),
    (0.2, -10.0, 7.9607841368435077186e-2),
    (0.2, -7.5, 1.0358763535037603251e-1),
    (0.2, -5.0, 1.4819344124611919777e-1),
    (0.2, -3.0, 2.258545451264880949e-1),
    (0.2, -2.0, 3.0567869641870600983e-1),
    (0.2, -1.0, 4.7110068893348294766e-1),
    (0.2, -0.5, 6.4296499192613900675e-1),
    (0.2, -0.1, 9.0133718859126698981e-1),
    (0.2, 0.0, 1.0),
    (0.2, 0.5, 2.0897724527766631839),
    (0.2, 1.0, 1.1823049531212143632e+1),
    (0.2, 2.0, 3.9481480091340036188e+14),
    (0.2, 3.5, 6.2889033654157560094e+228),
    (0.35, -50.0, 1.4308515262900738085e-2),
    (0.35, -30.0, 2.3698063183948949009e-2),
    (0.35, -20.0, 3.5266296164502610912e-2),
    (0.35, -12.0, 5.7840081117690314653e-2),
    (0.35, -10.0, 6.8846372120523518569e-2),
    (0.35, -7.5, 9.0302132314430687739e-2),
    (0.35, -5.0, 1.3102825027961321304e-1),
    (0.35, -3.0, 2.0422908348818012914e-1),
    (0.35, -2.0, 2.8205085624181673004e-1),
    (0.35, -1.0, 4.4932897685453544935e-1),
    (0.35, -0.5, 6.2791733985798999947e-1),
    (0.35, -0.1, 8.9788751169281640017e-1),
    (0.35, 0.0, 1.0),
    (0.35, 0.5, 2.0390551904480304156),
    (0.35, 1.0, 6.9589633140206370338),
    (0.35, 2.0, 4.0058321859595332821e+3),
    (0.35, 3.5, 1.0594129853909380184e+16),
    (0.35, 5.0, 3.9092233145529137226e+43),
    (0.5, -50.0, 1.12815362653237725e-2),
    (0.5, -30.0, 1.8795888861416751497e-2),
    (0.5, -20.0, 2.8174348741051319319e-2),
    (0.5, -12.0, 4.685422101489376262e-2),
    (0.5, -10.0, 5.6140992743822585858e-2),
    (0.5, -7.5, 7.4573693062876683005e-2),
    (0.5, -5.0, 1.1070463773306862637e-1),
    (0.5, -3.0, 1.7900115118138995042e-1),
    (0.5, -2.0, 2.5539567631050574387e-1),
    (0.5, -1.0, 4.2758357615580700441e-1),
    (0.5, -0.5, 6.1569034419292587487e-1),
    (0.5, -0.1, 8.9645697996912663666e-1),
    (0.5, 0.0, 1.0),
    (0.5, 0.5, 1.9523604891825570933),
    (0.5, 1.0, 5.0089800807622834663),
    (0.5, 2.0, 1.0894090438997797241e+2),
    (0.5, 3.5, 4.1796242244577031413e+5),
    (0.5, 5.0, 1.4400979867466104041e+11),
    (0.6, -50.0, 9.0837447731034546371e-3),
    (0.6, -30.0, 1.5211431482801457494e-2),
    (0.6, -20.0, 2.2946564273258376396e-2),
    (0.6, -12.0, 3.8643078839373572781e-2),
    (0.6, -10.0, 4.6589654426804280962e-2),
    (0.6, -7.5, 6.2638906158043226933e-2),
    (0.6, -5.0, 9.5117846438754620348e-2),
    (0.6, -3.0, 1.5970348026509122069e-1),
    (0.6, -2.0, 2.3557103111182496885e-1),
    (0.6, -1.0, 4.1332734094310630052e-1),
    (0.6, -0.5, 6.0947582195620002162e-1),
    (0.6, -0.1, 8.9659400596900926582e-1),
    (0.6, 0.0, 1.0),
    (0.6, 0.5, 1.8886847280930526884),
    (0.6, 1.0, 4.2486350026483744806),
    (0.6, 2.0, 3.9692804958505462628e+1),
    (0.6, 3.5, 5.3191453276165354505e+3),
    (0.6, 5.0, 3.726255100230058277e+6),
    (0.7, -50.0, 6.7936656703830938718e-3),
    (0.7, -30.0, 1.1444251527526973394e-2),
    (0.7, -20.0, 1.739569829160397999e-2),
    (0.7, -12.0, 2.9761168325449356606e-2),
    (0.7, -10.0, 3.6173265542309158149e-2),
    (0.7, -7.5, 4.9440801830311782964e-2),
    (0.7, -5.0, 7.7569357764769809981e-2),
    (0.7, -3.0, 1.3789710966502708216e-1),
    (0.7, -2.0, 2.1378672701529727534e-1),
    (0.7, -1.0, 3.9961197811559939027e-1),
    (0.7, -0.5, 6.0514759205956427271e-1),
    (0.7, -0.1, 8.9756112693138677065e-1),
    (0.7, 0.0, 1.0),
    (0.7, 0.5, 1.8249850568512024814),
    (0.7, 1.0, 3.7041461454375862416),
    (0.7, 2.0, 2.0966433131481956304e+1),
    (0.7, 3.5, 5.69047946780377768e+2),
    (0.7, 5.0, 3.0419819802049511246e+4),
    (0.85, -50.0, 3.3125051388333538042e-3),
    (0.85, -30.0, 5.6360485282933099318e-3),
    (0.85, -20.0, 8.6836101793061533277e-3),
    (0.85, -12.0, 1.5323981406109334261e-2),
    (0.85, -10.0, 1.895834380263732248e-2),
    (0.85, -7.5, 2.6969930585469308557e-2),
    (0.85, -5.0, 4.6477826547800755248e-2),
    (0.85, -3.0, 9.8974155451387433596e-2),
    (0.85, -2.0, 1.7693878714495356849e-1),
    (0.85, -1.0, 3.8123100301346264722e-1),
    (0.85, -0.5, 6.028845034702684786e-1),
    (0.85, -0.1, 9.0044704914472864046e-1),
    (0.85, 0.0, 1.0),
    (0.85, 0.5, 1.7333597691587133144),
    (0.85, 1.0, 3.1254943560174628784),
    (0.85, 2.0, 1.1227974303758113847e+1),
    (0.85, 3.5, 9.2584644440241957826e+1),
    (0.85, 5.0, 9.0214763308691598882e+2),
    (0.95, -50.0, 1.0672340392208429699e-3),
    (0.95, -30.0, 1.8277746789235517628e-3),
    (0.95, -20.0, 2.8432225780766325644e-3),
    (0.95, -12.0, 5.1537977632854271844e-3),
    (0.95, -10.0, 6.5071353122560632181e-3),
    (0.95, -7.5, 9.880086200590426888e-3),
    (0.95, -5.0, 2.126843729173112133e-2),
    (0.95, -3.0, 6.753202221407190526e-2),
    (0.95, -2.0, 1.4962506184111460783e-1),
    (0.95, -1.0, 3.7157362003067881398e-1),
    (0.95, -0.5, 6.0461402734213172616e-1),
    (0.95, -0.1, 9.0322405462807574056e-1),
    (0.95, 0.0, 1.0),
    (0.95, 0.5, 1.6760890928135578307),
    (0.95, 1.0, 2.8399807736949947271),
    (0.95, 2.0, 8.3633442941936385341),
    (0.95, 3.5, 4.4239402148244639486e+1),
    (0.95, 5.0, 2.4304667913230733865e+2),
    (0.99, -50.0, 2.095764990060077155e-4),
    (0.99, -30.0, 3.5975605168217239754e-4),
    (0.99, -20.0, 5.6162348367495294963e-4),
    (0.99, -12.0, 1.0348294476381980984e-3),
    (0.99, -10.0, 1.3478638060832084404e-3),
    (0.99, -7.5, 2.4664680868175331889e-3),
    (0.99, -5.0, 9.7680921391741281708e-3),
    (0.99, -3.0, 5.3451867506199626849e-2),
    (0.99, -2.0, 1.3821728069806402839e-1),
    (0.99, -1.0, 3.685483180603396169e-1),
    (0.99, -0.5, 6.0608995263141647798e-1),
    (0.99, -0.1, 9.0450358812369840815e-1),
    (0.99, 0.0, 1.0),
    (0.99, 0.5, 1.6541261938718982692),
    (0.99, 1.0, 2.7416571893307095386),
    (0.99, 2.0, 7.5665119538014304347),
    (0.99, 3.5, 3.4972634818235923902e+1),
    (0.99, 5.0, 1.6271337643708984613e+2),
    (1.0, -50.0, 1.928749847963917783e-22),
    (1.0, -30.0, 9.3576229688401746049e-14),
    (1.0, -20.0, 2.061153622438557828e-9),
    (1.0, -12.0, 6.1442123533282097587e-6),
    (1.0, -10.0, 4.5399929762484851536e-5),
    (1.0, -7.5, 5.530843701478335831e-4),
    (1.0, -5.0, 6.7379469990854670966e-3),
    (1.0, -3.0, 4.9787068367863942979e-2),
    (1.0, -2.0, 1.3533528323661269189e-1),
    (1.0, -1.0, 3.678794411714423216e-1),
    (1.0, -0.5, 6.065306597126334236e-1),
    (1.0, -0.1, 9.0483741803595956814e-1),
    (1.0, 0.0, 1.0),
    (1.0, 0.5, 1.6487212707001281468),
    (1.0, 1.0, 2.7182818284590452354),
    (1.0, 2.0, 7.3890560989306502272),
    (1.0, 3.5, 3.3115451958692313751e+1),
    (1.0, 5.0, 1.4841315910257660342e+2),
];

#[test]
fn matches_reference_table() {
    let mut worst = (0.0f64, 0.0, 0.0);
    for &(beta, x, expect) in TABLE {
        let got = mittag_leffler(beta, x).unwrap();
        let rel = ((got - expect) / expect).abs();
        if rel > worst.0 {
            worst = (rel, beta, x);
        }
        assert!(
            rel <= 1e-10,
            "E_{beta}({x}) = {got}, reference {expect}, rel err {rel:e}"
        );
    }
    eprintln!(
        "worst relative error {:e} at beta={}, x={}",
        worst.0, worst.1, worst.2
    );
}

#[test]
fn table_covers_required_range() {
    let betas: std::collections::BTreeSet<u64> = TABLE.iter().map(|r| r.0.to_bits()).collect();
    assert!(betas.len() >= 8);
    assert!(TABLE.iter().any(|r| r.1 == -50.0));
    assert!(TABLE.iter().any(|r| r.1 == 5.0));
}
