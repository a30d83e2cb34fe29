"""Literal symmetric triangle rules, keyed by polynomial exactness degree.

Each entry holds barycentric points and weights on the reference triangle
(weights sum to 1/2). Nodes are the Xiao-Gimbutas rules, polished to full
double precision against the monomial moments.
"""

TRIANGLE_RULES = {
    1: (
        [
            (1 / 3, 1 / 3, 1 / 3),
        ],
        [0.5],
    ),
    2: (
        [
            (2 / 3, 1 / 6, 1 / 6),
            (1 / 6, 2 / 3, 1 / 6),
            (1 / 6, 1 / 6, 2 / 3),
        ],
        [1 / 6, 1 / 6, 1 / 6],
    ),
    3: (
        [
            (0.44594849091596467, 0.4459484909159649, 0.10810301816807041),
            (0.10810301816807077, 0.4459484909159647, 0.44594849091596445),
            (0.4459484909159643, 0.10810301816807036, 0.4459484909159654),
            (0.8168475729804591, 0.09157621350977091, 0.09157621350977008),
            (0.09157621350977077, 0.8168475729804585, 0.09157621350977072),
            (0.09157621350977074, 0.09157621350977084, 0.8168475729804584),
        ],
        [0.11169079483900528, 0.11169079483900587, 0.11169079483900561, 0.05497587182766122, 0.054975871827661005, 0.05497587182766093],
    ),
    4: (
        [
            (0.44594849091596483, 0.44594849091596495, 0.10810301816807018),
            (0.10810301816807094, 0.4459484909159646, 0.4459484909159645),
            (0.445948490915965, 0.10810301816807015, 0.4459484909159649),
            (0.8168475729804547, 0.09157621350977234, 0.09157621350977294),
            (0.09157621350977219, 0.8168475729804571, 0.09157621350977074),
            (0.09157621350977219, 0.0915762135097708, 0.816847572980457),
        ],
        [0.11169079483900438, 0.1116907948390061, 0.11169079483900433, 0.05497587182766231, 0.05497587182766143, 0.05497587182766146],
    ),
    5: (
        [
            (0.7974269853530751, 0.10128650732346099, 0.1012865073234639),
            (0.10128650732345615, 0.7974269853530871, 0.10128650732345676),
            (0.10128650732345601, 0.1012865073234559, 0.7974269853530881),
            (0.470142064105118, 0.4701420641051159, 0.05971587178976607),
            (0.05971587178975801, 0.470142064105118, 0.47014206410512405),
            (0.47014206410510684, 0.05971587178977504, 0.47014206410511816),
            (0.3333333333333093, 0.3333333333333528, 0.3333333333333379),
        ],
        [0.06296959027241833, 0.06296959027241375, 0.06296959027241293, 0.06619707639425079, 0.06619707639424452, 0.06619707639425555, 0.11250000000000418],
    ),
    6: (
        [
            (0.5611400349003376, 0.2194299825498306, 0.2194299825498318),
            (0.21942998254978419, 0.5611400349004475, 0.2194299825497683),
            (0.2194299825497832, 0.21942998254977328, 0.5611400349004435),
            (0.48013796411217774, 0.48013796411225107, 0.03972407177557117),
            (0.039724071775588676, 0.48013796411220616, 0.4801379641122052),
            (0.48013796411217186, 0.039724071775574236, 0.4801379641122539),
            (0.8390092597146951, 0.14161901592401843, 0.019371724361286376),
            (0.01937172436127138, 0.8390092597147756, 0.14161901592395304),
            (0.14161901592396975, 0.019371724361216824, 0.8390092597148134),
            (0.14161901592396697, 0.8390092597148123, 0.019371724361220692),
            (0.019371724361281872, 0.14161901592394857, 0.8390092597147696),
            (0.8390092597147129, 0.019371724361277907, 0.14161901592400924),
        ],
        [0.08566656207648013, 0.08566656207647562, 0.08566656207647347, 0.04036554479651433, 0.040365544796526626, 0.04036554479651652, 0.02031727989684754, 0.02031727989683874, 0.020317279896818773, 0.020317279896820455, 0.02031727989684154, 0.02031727989684624],
    ),
    7: (
        [
            (0.4731956536893649, 0.4731956536889928, 0.053608692621642376),
            (0.05360869262130824, 0.4731956536893306, 0.4731956536893612),
            (0.473195653689135, 0.05360869262165006, 0.47319565368921496),
            (0.884404719890644, 0.05779764005478249, 0.05779764005457354),
            (0.057797640054398226, 0.8844047198910754, 0.05779764005452639),
            (0.05779764005451249, 0.057797640054530086, 0.8844047198909574),
            (0.693689782004053, 0.25933901186602953, 0.04697120612991752),
            (0.0469712061299683, 0.6936897820042074, 0.2593390118658243),
            (0.2593390118657749, 0.04697120613005111, 0.693689782004174),
            (0.25933901186545805, 0.6936897820044443, 0.046971206130097615),
            (0.046971206130002496, 0.25933901186584035, 0.6936897820041572),
            (0.6936897820042366, 0.0469712061299791, 0.25933901186578434),
            (0.5166727872054033, 0.24166360639737136, 0.2416636063972253),
            (0.24166360639675616, 0.5166727872057799, 0.24166360639746393),
            (0.2416636063968891, 0.2416636063973833, 0.5166727872057276),
        ],
        [0.02659041664849246, 0.02659041664830051, 0.026590416648458102, 0.02045908519711454, 0.02045908519699722, 0.02045908519703724, 0.027877270270194383, 0.027877270270279954, 0.027877270270325626, 0.0278772702703658, 0.02787727027029548, 0.02787727027029443, 0.06386262428071089, 0.06386262428055987, 0.06386262428057352],
    ),
    8: (
        [
            (0.658861384495845, 0.1705693077522243, 0.1705693077519307),
            (0.17056930775229676, 0.6588613844965042, 0.17056930775119902),
            (0.17056930775244705, 0.17056930775165519, 0.6588613844958977),
            (0.4592925882931598, 0.45929258829263986, 0.08141482341420034),
            (0.08141482341442946, 0.45929258829303493, 0.45929258829253555),
            (0.4592925882933118, 0.08141482341462666, 0.4592925882920615),
            (0.3333333333328214, 0.33333333333389575, 0.3333333333332829),
            (0.8989055433654317, 0.05054722831726175, 0.05054722831730652),
            (0.050547228316929496, 0.8989055433660342, 0.05054722831703627),
            (0.05054722831714298, 0.050547228317053335, 0.8989055433658036),
            (0.7284923929559134, 0.26311282963428023, 0.008394777409806452),
            (0.008394777410457632, 0.7284923929552174, 0.263112829634325),
            (0.26311282963510196, 0.00839477740999741, 0.7284923929549006),
            (0.26311282963426574, 0.7284923929559977, 0.008394777409736572),
            (0.008394777410545506, 0.26311282963441973, 0.7284923929550348),
            (0.728492392955495, 0.008394777409841035, 0.2631128296346639),
        ],
        [0.05160868526739893, 0.05160868526731386, 0.051608685267351545, 0.04754581713358437, 0.047545817133549335, 0.04754581713361086, 0.0721578038388713, 0.01622924881170242, 0.01622924881156917, 0.016229248811641027, 0.013615157087128031, 0.013615157087339562, 0.013615157087248206, 0.013615157087131137, 0.0136151570873836, 0.013615157087176642],
    ),
    9: (
        [
            (0.48968251919737005, 0.48968251919980627, 0.020634961602823743),
            (0.020634961586664502, 0.48968251920616046, 0.48968251920717504),
            (0.48968251919526323, 0.020634961602218668, 0.4896825192025181),
            (0.33333333332503495, 0.33333333333725923, 0.3333333333377058),
            (0.6235929287646083, 0.18820353561664674, 0.18820353561874506),
            (0.18820353562435801, 0.6235929287582208, 0.18820353561742117),
            (0.18820353562298398, 0.18820353561856085, 0.6235929287584552),
            (0.7411985987861444, 0.22196298916003607, 0.03683841205381953),
            (0.03683841205614219, 0.741198598783235, 0.2219629891606228),
            (0.2219629891591759, 0.03683841205493638, 0.7411985987858877),
            (0.22196298916048404, 0.7411985987848507, 0.036838412054665225),
            (0.036838412055944625, 0.22196298916032353, 0.7411985987837318),
            (0.7411985987840195, 0.036838412053182765, 0.22196298916279772),
            (0.4370895914991302, 0.43708959148788323, 0.1258208170129866),
            (0.12582081698855024, 0.43708959150627913, 0.4370895915051706),
            (0.43708959149720633, 0.12582081701212391, 0.4370895914906698),
            (0.910540973210435, 0.04472951339438326, 0.04472951339518167),
            (0.044729513394409, 0.9105409732111102, 0.04472951339448084),
            (0.044729513394141884, 0.04472951339443026, 0.9105409732114279),
        ],
        [0.01566735011365999, 0.015667350105981477, 0.015667350113314153, 0.04856789814531927, 0.03982386946410705, 0.039823869463942764, 0.039823869463829514, 0.021641769688203766, 0.0216417696893955, 0.02164176968859763, 0.021641769688562823, 0.021641769689241506, 0.021641769687997477, 0.03891377050180694, 0.038913770506072774, 0.03891377050188727, 0.012788837829482445, 0.012788837829343907, 0.012788837829253752],
    ),
    10: (
        [
            (0.49517345979766325, 0.49517345980233873, 0.009653080399997993),
            (0.009653080399671499, 0.4951734597995003, 0.49517345980082816),
            (0.4951734598098829, 0.009653080390295119, 0.49517345979982197),
            (0.9617211695288177, 0.019139415244878808, 0.019139415226303517),
            (0.019139415240061148, 0.9617211695177064, 0.019139415242232487),
            (0.019139415235377433, 0.019139415242166603, 0.961721169522456),
            (0.8315416244146464, 0.13373475510302663, 0.034723620482327),
            (0.0347236204826703, 0.8315416244171482, 0.1337347551001815),
            (0.1337347550899981, 0.034723620481894306, 0.8315416244281076),
            (0.1337347550985519, 0.8315416244198619, 0.034723620481586205),
            (0.03472362048065947, 0.13373475510273877, 0.8315416244166017),
            (0.8315416244363525, 0.03472362047906315, 0.13373475508458432),
            (0.3333333333350443, 0.3333333333298371, 0.33333333333511855),
            (0.6357241363790911, 0.32669313627997737, 0.037582727340931515),
            (0.03758272734189927, 0.635724136377522, 0.3266931362805787),
            (0.32669313628747576, 0.037582727340203397, 0.6357241363723208),
            (0.32669313628342117, 0.635724136374849, 0.03758272734172981),
            (0.03758272734193857, 0.32669313628342805, 0.6357241363746334),
            (0.6357241363676419, 0.037582727340689875, 0.3266931362916682),
            (0.6310299746349068, 0.184485012678844, 0.18448501268624923),
            (0.18448501268777012, 0.6310299746282608, 0.18448501268396905),
            (0.18448501268317263, 0.18448501268338835, 0.631029974633439),
            (0.4282348209481013, 0.4282348209350588, 0.14353035811683992),
            (0.1435303581172151, 0.42823482094169113, 0.42823482094109383),
            (0.4282348209394855, 0.1435303581158526, 0.4282348209446619),
        ],
        [0.004896295249400926, 0.004896295249488085, 0.0048962952463391975, 0.0031926796138291107, 0.0031926796147760807, 0.003192679614343532, 0.014481140731163206, 0.014481140731745971, 0.014481140731909955, 0.014481140731672632, 0.014481140731197219, 0.014481140732083132, 0.041807437185060754, 0.01936952454305028, 0.019369524543442398, 0.019369524545246684, 0.019369524543538325, 0.019369524543219455, 0.0193695245453295, 0.03931688487302046, 0.03931688487353471, 0.03931688487294274, 0.037623663985137015, 0.0376236639848438, 0.037623663983684864],
    ),
    11: (
        [
            (0.9383062088410665, 0.030846895620612592, 0.03084689553832086),
            (0.03084689561879443, 0.9383062086992585, 0.030846895681947054),
            (0.0308468957070529, 0.030846895579738794, 0.9383062087132084),
            (0.4987801643526517, 0.4987801660196934, 0.002439669627654974),
            (0.002439669606419559, 0.498780164234347, 0.49878016615923343),
            (0.49878016606382414, 0.0024396696825762444, 0.4987801642535996),
            (0.826329717574135, 0.15930361989181135, 0.014366662534053663),
            (0.014366662769764726, 0.8263297172250403, 0.15930362000519493),
            (0.15930362018922017, 0.014366662599800297, 0.8263297172109795),
            (0.15930361971110327, 0.8263297177419061, 0.014366662546990613),
            (0.01436666259344943, 0.15930361953085354, 0.8263297178756971),
            (0.8263297181701242, 0.014366662383902126, 0.15930361944597363),
            (0.33333333322124087, 0.33333333342730526, 0.33333333335145393),
            (0.7735843457676879, 0.1132078271289373, 0.11320782710337485),
            (0.11320782746984163, 0.7735843452308364, 0.11320782729932195),
            (0.11320782747532399, 0.11320782716573703, 0.7735843453589389),
            (0.43665501548380337, 0.4366550172499547, 0.12668996726624196),
            (0.12668996711094782, 0.4366550157699355, 0.4366550171191167),
            (0.43665501701197074, 0.12668996728765683, 0.43665501570037246),
            (0.5710330827914543, 0.21448345908618224, 0.21448345812236347),
            (0.21448345803236146, 0.571033082833027, 0.21448345913461153),
            (0.2144834589665663, 0.21448345826760615, 0.5710330827658275),
            (0.6417047163208285, 0.3106312167639532, 0.04766406691521835),
            (0.047664066850464204, 0.6417047161923286, 0.3106312169572072),
            (0.3106312169746597, 0.04766406692038967, 0.6417047161049506),
            (0.3106312159545329, 0.641704717028681, 0.04766406701678604),
            (0.04766406702088821, 0.3106312157226457, 0.6417047172564662),
            (0.6417047174106891, 0.04766406704396946, 0.3106312155453414),
        ],
        [0.006124648454495501, 0.006124648480936882, 0.006124648478324892, 0.006232745929927031, 0.006232745926040115, 0.006232745946812631, 0.007278811663796025, 0.0072788117252920725, 0.007278811686801971, 0.007278811658947009, 0.007278811666428107, 0.007278811609750325, 0.04072256735976594, 0.020064621197937664, 0.02006462117864944, 0.020064621187233737, 0.03154743608605183, 0.031547436064960264, 0.03154743609925592, 0.03392255390644467, 0.03392255384773268, 0.033922553865822845, 0.020321424383319773, 0.020321424326590072, 0.020321424339547003, 0.02032142429134787, 0.020321424302234617, 0.020321424335553152],
    ),
    12: (
        [
            (0.4570749858409745, 0.2714625071630308, 0.2714625069959947),
            (0.2714625068443781, 0.45707498600961916, 0.27146250714600273),
            (0.27146250697657853, 0.2714625069689237, 0.45707498605449776),
            (0.7814843455753094, 0.10925782721781899, 0.1092578272068716),
            (0.10925782745024201, 0.7814843448977735, 0.10925782765198447),
            (0.10925782726601119, 0.109257827816913, 0.7814843449170759),
            (0.44011164855639456, 0.44011164877986003, 0.11977670266374546),
            (0.11977670260103507, 0.4401116486733958, 0.4401116487255691),
            (0.4401116486042476, 0.11977670278369737, 0.44011164861205504),
            (0.6282497519558656, 0.25545422832630543, 0.11629601971782885),
            (0.1162960195716723, 0.6282497517478098, 0.25545422868051787),
            (0.2554542284326221, 0.11629601952077061, 0.6282497520466073),
            (0.25545422834853115, 0.6282497518720755, 0.11629601977939329),
            (0.11629601979891702, 0.2554542286389586, 0.6282497515621244),
            (0.6282497519630954, 0.116296019669805, 0.2554542283670996),
            (0.8513377928389035, 0.12727971704785518, 0.021382490113241226),
            (0.021382490203556065, 0.8513377925513058, 0.12727971724513812),
            (0.12727971685538286, 0.021382490302155832, 0.8513377928424614),
            (0.12727971699426147, 0.8513377927561877, 0.021382490249550835),
            (0.02138249014198057, 0.12727971720810083, 0.8513377926499186),
            (0.8513377930744239, 0.021382490133299088, 0.12727971679227698),
            (0.685310164120889, 0.29165567948430426, 0.023034156394806767),
            (0.023034156341570244, 0.6853101639375322, 0.29165567972089756),
            (0.2916556792807432, 0.023034156307568658, 0.6853101644116881),
            (0.29165567947429916, 0.6853101641371837, 0.02303415638851712),
            (0.02303415640604045, 0.2916556796873919, 0.6853101639065676),
            (0.6853101643707217, 0.023034156351051157, 0.2916556792782272),
            (0.4882037509710052, 0.4882037509419358, 0.023592498087058975),
            (0.02359249808043523, 0.48820375097893776, 0.488203750940627),
            (0.48820375085659184, 0.02359249813974734, 0.48820375100366087),
            (0.9507072733733487, 0.02464636334806716, 0.024646363278584164),
            (0.024646363369115753, 0.9507072731924741, 0.02464636343841019),
            (0.024646363342233024, 0.024646363425621272, 0.9507072732321457),
        ],
        [0.03127060660487438, 0.03127060659947335, 0.031270606587037106, 0.014243026007668266, 0.01424302602179236, 0.014243026024477964, 0.024959167512374595, 0.024959167456033077, 0.024959167501746492, 0.021613681868015145, 0.021613681815081998, 0.021613681852211405, 0.02161368183910371, 0.021613681811510244, 0.021613681875775476, 0.007541838740845234, 0.007541838770774492, 0.007541838788004986, 0.007541838779034761, 0.007541838751692326, 0.007541838737574716, 0.010891792538152147, 0.010891792510442325, 0.010891792506402997, 0.010891792541416803, 0.010891792542222589, 0.010891792535783007, 0.01213341905181477, 0.012133419030277459, 0.01213341909147621, 0.003965821222068791, 0.00396582124545824, 0.003965821239382561],
    ),
}
