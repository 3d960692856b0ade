// Generated by generate.py (mpmath, 150 digits working precision). Do not edit.

/// (alpha, x, E_alpha(x)) from the Taylor series.
pub const MITTAG_LEFFLER: &[(f64, f64, f64)] = &[
    (1.25, 0.0, 1.0),
    (1.25, -0.001, 0.99911769071977182654),
    (1.25, -0.5, 0.62687869726747622194),
    (1.25, -1.0, 0.36553444002525030595),
    (1.25, -2.5, -0.012117116277980838001),
    (1.25, -4.99, -0.10089553878087460895),
    (1.25, -5.01, -0.10071599335746200405),
    (1.25, -7.5, -0.062153693665700198834),
    (1.25, -10.0, -0.033192071062565766551),
    (1.25, -13.3, -0.018126339239837275228),
    (1.25, -17.0, -0.013083120458300814658),
    (1.25, -20.0, -0.011143230102040975228),
    (1.25, -25.0, -0.0088890973462113900657),
    (1.25, -30.0, -0.0073112585579934502641),
    (1.25, -35.0, -0.0061975342792864117467),
    (1.25, -40.0, -0.0053796759382585417425),
    (1.25, -45.0, -0.0047531164438343097959),
    (1.25, -50.0, -0.0042572794085854681873),
    (1.5, 0.0, 1.0),
    (1.5, -0.001, 0.99924791386949954798),
    (1.5, -0.5, 0.66323679487242795678),
    (1.5, -1.0, 0.39662936531808808449),
    (1.5, -2.5, -0.089558637643441311285),
    (1.5, -4.99, -0.30004973345640103971),
    (1.5, -5.01, -0.30011027045188027262),
    (1.5, -7.5, -0.22677465777284576473),
    (1.5, -10.0, -0.10971305425274014669),
    (1.5, -13.3, -0.0082014399272245268326),
    (1.5, -17.0, 0.025459448938050209796),
    (1.5, -20.0, 0.019595747930187505735),
    (1.5, -25.0, -0.0030225852438277495514),
    (1.5, -30.0, -0.014470224834105874553),
    (1.5, -35.0, -0.014233800043128165351),
    (1.5, -40.0, -0.009930965478693434638),
    (1.5, -45.0, -0.0063239367559286900774),
    (1.5, -50.0, -0.0045783851058392779913),
    (1.75, 0.0, 1.0),
    (1.75, -0.001, 0.9993783343936904963),
    (1.75, -0.5, 0.70995321772058425723),
    (1.75, -1.0, 0.45900437557152722052),
    (1.75, -2.5, -0.094279101100519395784),
    (1.75, -4.99, -0.52465538097240808962),
    (1.75, -5.01, -0.52629832930809204493),
    (1.75, -7.5, -0.58241153862649746784),
    (1.75, -10.0, -0.45392110108013876532),
    (1.75, -13.3, -0.193174533177616063),
    (1.75, -17.0, 0.067472125828073786921),
    (1.75, -20.0, 0.20311972894262052619),
    (1.75, -25.0, 0.27168530596702578024),
    (1.75, -30.0, 0.20308994223622007542),
    (1.75, -35.0, 0.079932608951516847003),
    (1.75, -40.0, -0.035735756649752822905),
    (1.75, -45.0, -0.11154271140876467028),
    (1.75, -50.0, -0.13970738964219355219),
];

/// (nu, x, J_nu(x)) from the power series.
pub const BESSEL_J: &[(f64, f64, f64)] = &[
    (0.0, 0.0, 1.0),
    (0.0, 0.01, 0.99997500015624956597),
    (0.0, 0.7, 0.88120088860740528084),
    (0.0, 3.0, -0.26005195490193343762),
    (0.0, 4.99, -0.18086690251169556523),
    (0.0, 5.01, -0.17431543205674916847),
    (0.0, 7.5, 0.26633965788037839687),
    (0.0, 12.0, 0.047689310796833536624),
    (0.0, 13.7, 0.20322083263300711072),
    (0.0, 20.0, 0.16702466434058315473),
    (0.0, 33.3, 0.063338485947520899644),
    (0.0, 50.0, 0.055812327669251815005),
    (0.0, 77.7, 0.0050686646649960507491),
    (0.0, 100.0, 0.019985850304223122424),
    (0.5, 0.0, 0.0),
    (0.5, 0.01, 0.079787126279334219655),
    (0.5, 0.7, 0.61436106679126508322),
    (0.5, 3.0, 0.065008182877375778114),
    (0.5, 4.99, -0.34350671540453924641),
    (0.5, 5.01, -0.34079808845957249985),
    (0.5, 7.5, 0.27328277400550601529),
    (0.5, 12.0, -0.12358853595594194375),
    (0.5, 13.7, 0.19529282179233048264),
    (0.5, 20.0, 0.16288076385502987091),
    (0.5, 33.3, 0.13153719043550375598),
    (0.5, 50.0, -0.029605831888924612568),
    (0.5, 77.7, 0.067391670952166051312),
    (0.5, 100.0, -0.040402132716252123744),
    (1.0, 0.0, 0.0),
    (1.0, 0.01, 0.0049999375002604161241),
    (1.0, 0.7, 0.32899574154005894785),
    (1.0, 3.0, 0.33905895852593645893),
    (1.0, 4.99, -0.32644149050101630666),
    (1.0, 5.01, -0.32868309571784987974),
    (1.0, 7.5, 0.13524842757970550518),
    (1.0, 12.0, -0.22344710449062761237),
    (1.0, 13.7, 0.079142765100114653385),
    (1.0, 20.0, 0.066833124175850045579),
    (1.0, 33.3, 0.12386214790148026),
    (1.0, 50.0, -0.097511828125175137661),
    (1.0, 77.7, 0.09040839677718482096),
    (1.0, 100.0, -0.077145352014112158033),
    (1.5, 0.0, 0.0),
    (1.5, 0.01, 2.6595886066191771721e-4),
    (1.5, 0.7, 0.14826350832010162274),
    (1.5, 3.0, 0.47771821508709177155),
    (1.5, 4.99, -0.16672798460167392276),
    (1.5, 5.01, -0.17255336413202113967),
    (1.5, 7.5, -0.064553196129517588785),
    (1.5, 12.0, -0.20466344849652968759),
    (1.5, 13.7, -0.077010104588673014714),
    (1.5, 20.0, -0.064662866592310355005),
    (1.5, 33.3, 0.046560843925263306685),
    (1.5, 50.0, -0.10947687298831803539),
    (1.5, 77.7, 0.061296359051308009419),
    (1.5, 100.0, -0.069207112795890604984),
    (2.0, 0.0, 0.0),
    (2.0, 0.01, 1.2499895833658853624e-5),
    (2.0, 0.7, 0.058786944364191713015),
    (2.0, 3.0, 0.48609126058589107691),
    (2.0, 4.99, 0.050028629765797245925),
    (2.0, 5.01, 0.043104615402916881151),
    (2.0, 7.5, -0.23027341052579026215),
    (2.0, 12.0, -0.084930494878604805352),
    (2.0, 13.7, -0.19166714429722394964),
    (2.0, 20.0, -0.16034135192299815017),
    (2.0, 33.3, -0.055899317905389953097),
    (2.0, 50.0, -0.059712800794258820511),
    (2.0, 77.7, -0.0027415502048368532984),
    (2.0, 100.0, -0.021528757344505365585),
    (2.5, 0.0, 0.0),
    (2.5, 0.01, 5.3191924109550804572e-7),
    (2.5, 0.7, 0.021053968866313299942),
    (2.5, 3.0, 0.41271003220971599344),
    (2.5, 4.99, 0.24326945011295171769),
    (2.5, 5.01, 0.23747272071584726651),
    (2.5, 7.5, -0.2991040524573130508),
    (2.5, 12.0, 0.072422673831809521857),
    (2.5, 13.7, -0.21215634834459464644),
    (2.5, 20.0, -0.17258019384387642416),
    (2.5, 33.3, -0.12734251981160616078),
    (2.5, 50.0, 0.023037219509625530445),
    (2.5, 77.7, -0.065025016162540259442),
    (2.5, 100.0, 0.038325919332375405594),
    (3.7, 0.0, 0.0),
    (3.7, 0.01, 1.9850938810215586219e-10),
    (3.7, 0.7, 0.0012980777824733128206),
    (3.7, 3.0, 0.17601373939926643703),
    (3.7, 4.99, 0.40886944864125455366),
    (3.7, 5.01, 0.40881401486945719416),
    (3.7, 7.5, -0.072902619331466803545),
    (3.7, 12.0, 0.22412194772724561576),
    (3.7, 13.7, 0.056286950171354031802),
    (3.7, 20.0, 0.069738918576184689038),
    (3.7, 33.3, -0.027693379262250217317),
    (3.7, 50.0, 0.10197582879067729799),
    (3.7, 77.7, -0.043683604831147291543),
    (3.7, 100.0, 0.056858397343506870615),
    (5.5, 0.0, 0.0),
    (5.5, 0.01, 7.6756276288716467222e-16),
    (5.5, 0.7, 1.0591554208565099489e-5),
    (5.5, 3.0, 0.022660934945461324753),
    (5.5, 4.99, 0.18932472119467944961),
    (5.5, 5.01, 0.19180553783547099886),
    (5.5, 7.5, 0.34274292228773272755),
    (5.5, 12.0, -0.18641425933248544735),
    (5.5, 13.7, 0.13965128800623477665),
    (5.5, 20.0, 0.05953232545408938862),
    (5.5, 33.3, 0.096366648076491924774),
    (5.5, 50.0, -0.11311042345854331308),
    (5.5, 77.7, 0.072329277302872902426),
    (5.5, 100.0, -0.074124664027219352703),
    (6.0, 0.0, 0.0),
    (6.0, 0.01, 2.1701311384049672817e-17),
    (6.0, 0.7, 2.5088071685845611919e-6),
    (6.0, 3.0, 0.011393932332213069421),
    (6.0, 4.99, 0.13001176083196166681),
    (6.0, 5.01, 0.13208939119237450344),
    (6.0, 7.5, 0.35414052691237859874),
    (6.0, 12.0, -0.24372476722886662837),
    (6.0, 13.7, 0.022593567289687079677),
    (6.0, 20.0, -0.055086049563665760182),
    (6.0, 33.3, 0.0091757268245844267574),
    (6.0, 50.0, -0.087121026820968880282),
    (6.0, 77.7, 0.01584810223112475164),
    (6.0, 100.0, -0.033525383144176674273),
    (8.5, 0.0, 0.0),
    (8.5, 0.01, 2.3154259280564093954e-25),
    (8.5, 0.7, 1.1024574035829769704e-9),
    (8.5, 3.0, 2.0706674473691639588e-4),
    (8.5, 4.99, 0.010098983211756006156),
    (8.5, 5.01, 0.010389526388982094647),
    (8.5, 7.5, 0.1271454153441242912),
    (8.5, 12.0, 0.1496304127384079241),
    (8.5, 13.7, -0.15679032165915875672),
    (8.5, 20.0, 0.030877189644357516033),
    (8.5, 33.3, 0.023926841375567660829),
    (8.5, 50.0, 0.050064768138781518836),
    (8.5, 77.7, 0.033344017318493140835),
    (8.5, 100.0, -0.013583593502240608023),
    (10.0, 0.0, 0.0),
    (10.0, 0.01, 2.6911383392363444211e-30),
    (10.0, 0.7, 7.5175911502153953928e-12),
    (10.0, 3.0, 1.2928351645715883778e-5),
    (10.0, 4.99, 0.0014421494055893720591),
    (10.0, 5.01, 0.0014938445397028434558),
    (10.0, 7.5, 0.038998257889412210093),
    (10.0, 12.0, 0.30047603527126931073),
    (10.0, 13.7, 0.13585302194367958612),
    (10.0, 20.0, 0.18648255802394508321),
    (10.0, 33.3, 0.12182178268240812037),
    (10.0, 50.0, -0.11384784914946938567),
    (10.0, 77.7, 0.050442297340982752079),
    (10.0, 100.0, -0.054732176935472014742),
];

/// (re z, im z, re Gamma(z), im Gamma(z)).
pub const GAMMA: &[(f64, f64, f64, f64)] = &[
    (0.5, 0.0, 1.7724538509055160273, 0.0),
    (2.5, 1.5, 0.30993622584074135331, 0.73408427362148133942),
    (-0.3, 0.7, -0.84835962739534072294, -0.53024136947899728874),
    (-4.5, 0.0, -0.060019601300504246427, 0.0),
    (-7.25, 2.0, 3.439537841181362175e-7, -1.7744918324273923605e-6),
    (0.75, -10.0, 4.4168165777257590835e-7, -5.0605906847496376591e-7),
    (1.0, 30.0, -3.9764735612004935077e-20, -2.5036452591980261356e-20),
    (12.5, -3.0, 3.3950246652170530353e+7, -8.8115224657653062402e+7),
    (-1.5, -0.25, 1.78349853387700984, -0.31791669989644389936),
    (0.05, 0.0, 19.470085311255512864, 0.0),
];
